// Copyright 2026 The sga-games Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SGA_CORE_HPP_
#define SGA_CORE_HPP_

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sga {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// A point in the joint parameter space of all players.
using Point = Vector;

// Raised for malformed inputs: wrong dimensions, bad parameters, unknown ids.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical evaluation produces non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

// How the flat parameter vector w = (w_1, ..., w_n) splits among n players.
class PlayerPartition {
 public:
  PlayerPartition() = default;

  explicit PlayerPartition(std::vector<Index> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw InvalidArgument("partition needs at least one player");
    offsets_.reserve(sizes_.size());
    Index offset = 0;
    for (Index s : sizes_) {
      if (s < 1) throw InvalidArgument("every player controls at least one parameter");
      offsets_.push_back(offset);
      offset += s;
    }
    dim_ = offset;
  }

  // n equal players with one parameter each.
  static PlayerPartition scalar_players(std::size_t n) {
    return PlayerPartition(std::vector<Index>(n, 1));
  }

  std::size_t players() const { return sizes_.size(); }
  Index dim() const { return dim_; }
  Index size(std::size_t i) const { return sizes_.at(i); }
  Index offset(std::size_t i) const { return offsets_.at(i); }
  const std::vector<Index>& sizes() const { return sizes_; }
  const std::vector<Index>& offsets() const { return offsets_; }

  // Player i's slice of a joint vector.
  auto block(const Vector& w, std::size_t i) const { return w.segment(offset(i), size(i)); }
  auto block(Vector& w, std::size_t i) const { return w.segment(offset(i), size(i)); }

  void check_point(const Vector& w) const {
    if (w.size() != dim_) {
      throw InvalidArgument("point has length " + std::to_string(w.size()) +
                            ", partition expects " + std::to_string(dim_));
    }
    if (!w.allFinite()) throw InvalidArgument("point has non-finite coordinates");
  }

  friend bool operator==(const PlayerPartition& a, const PlayerPartition& b) {
    return a.sizes_ == b.sizes_;
  }

 private:
  std::vector<Index> sizes_;
  std::vector<Index> offsets_;
  Index dim_ = 0;
};

}  // namespace sga

#endif  // SGA_CORE_HPP_
