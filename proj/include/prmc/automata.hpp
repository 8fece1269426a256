#pragma once

#include "prmc/automata/algorithms.hpp"
#include "prmc/automata/dot.hpp"
#include "prmc/automata/enumerate.hpp"
#include "prmc/automata/layout.hpp"
#include "prmc/automata/nfa.hpp"
#include "prmc/automata/regex.hpp"
#include "prmc/automata/text_format.hpp"
#include "prmc/automata/tracks.hpp"
