#pragma once

#include "singlex/errors.hpp"
#include "singlex/kb_graph.hpp"
#include "singlex/matrix.hpp"
#include "singlex/linalg.hpp"
#include "singlex/spectral.hpp"
#include "singlex/hourglass.hpp"
#include "singlex/elm.hpp"
#include "singlex/lexicon.hpp"
