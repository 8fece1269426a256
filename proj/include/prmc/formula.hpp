#pragma once

#include "prmc/formula/ast.hpp"
#include "prmc/formula/desugar.hpp"
#include "prmc/formula/parser.hpp"
#include "prmc/formula/printer.hpp"
