#ifndef IPBENCH_BENCH_HPP
#define IPBENCH_BENCH_HPP

#include "ipbench/bench/calibrate.hpp"
#include "ipbench/bench/profile.hpp"
#include "ipbench/bench/records.hpp"
#include "ipbench/bench/run_matrix.hpp"

#endif  // IPBENCH_BENCH_HPP
