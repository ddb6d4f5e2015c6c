#ifndef HMT_HMT_HPP
#define HMT_HMT_HPP

#include "hmt/block.hpp"
#include "hmt/chain.hpp"
#include "hmt/cofinite.hpp"
#include "hmt/collapse.hpp"
#include "hmt/coloring.hpp"
#include "hmt/constrained.hpp"
#include "hmt/cover.hpp"
#include "hmt/filter.hpp"
#include "hmt/game.hpp"
#include "hmt/parallel.hpp"
#include "hmt/partition.hpp"
#include "hmt/search.hpp"
#include "hmt/semigroup.hpp"
#include "hmt/sequence.hpp"
#include "hmt/suites.hpp"
#include "hmt/threshold.hpp"
#include "hmt/transfer.hpp"
#include "hmt/verdict.hpp"

#endif
