#pragma once

#include <string>
#include <vector>

namespace starkband {

// Upper-band occupation N_b(t) sampled at strictly increasing times.
struct OscillationTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::string meta;  // parameter fingerprint

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  void push(double t, double v) {
    times.push_back(t);
    values.push_back(v);
  }
};

}  // namespace starkband
