#include "npart/core.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "npart/errors.hpp"

namespace npart {

Instance::Instance(std::vector<std::int64_t> weights)
    : Instance(std::move(weights), 1) {}

Instance Instance::allowing_zeros(std::vector<std::int64_t> weights) {
  return Instance(std::move(weights), 0);
}

Instance::Instance(std::vector<std::int64_t> weights, std::int64_t min_weight)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("instance needs at least one weight");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] < min_weight) {
      throw std::invalid_argument("weight at index " + std::to_string(i) + " is " +
                                  std::to_string(weights_[i]) + ", minimum is " +
                                  std::to_string(min_weight));
    }
    total_ += weights_[i];
    if (total_ > kMaxTotal) {
      throw std::invalid_argument("total weight exceeds " + std::to_string(kMaxTotal) +
                                  "; (total)^2 must fit signed 64-bit");
    }
  }
}

Partition::Partition(std::vector<std::uint8_t> side) : side_(std::move(side)) {
  if (side_.empty()) throw std::invalid_argument("partition needs at least one label");
  for (std::size_t i = 0; i < side_.size(); ++i) {
    if (side_[i] > 1) {
      throw std::invalid_argument("side label at index " + std::to_string(i) +
                                  " must be 0 or 1");
    }
  }
}

Partition Partition::from_indices(int n, const std::vector<int>& side_one) {
  if (n < 1) throw std::invalid_argument("partition needs at least one label");
  std::vector<std::uint8_t> side(static_cast<std::size_t>(n), 0);
  for (int i : side_one) {
    if (i < 0 || i >= n) {
      throw std::invalid_argument("element index " + std::to_string(i) +
                                  " outside [0, " + std::to_string(n) + ")");
    }
    side[static_cast<std::size_t>(i)] = 1;
  }
  return Partition(std::move(side));
}

std::vector<int> Partition::side_one_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i) {
    if (on_side_one(i)) out.push_back(i);
  }
  return out;
}

Energy energy(const Instance& instance, const Partition& partition) {
  if (instance.n() != partition.n()) {
    throw std::invalid_argument("partition has " + std::to_string(partition.n()) +
                                " labels, instance has " + std::to_string(instance.n()));
  }
  std::int64_t side_one = 0;
  for (int i = 0; i < instance.n(); ++i) {
    if (partition.on_side_one(i)) side_one += instance.weight(i);
  }
  const std::int64_t diff = side_one - (instance.total() - side_one);
  return diff < 0 ? -diff : diff;
}

Partition complement(const Partition& partition) {
  std::vector<std::uint8_t> side = partition.side();
  for (auto& label : side) label ^= 1;
  return Partition(std::move(side));
}

Instance parse_instance(std::istream& in, const std::string& origin) {
  std::vector<std::int64_t> weights;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    std::size_t end = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(begin, end - begin + 1);
    std::int64_t value = 0;
    std::size_t consumed = 0;
    try {
      value = std::stoll(token, &consumed);
    } catch (const std::exception&) {
      throw IoError(origin + ": line " + std::to_string(line_no) +
                    ": not a weight: '" + token + "'");
    }
    if (consumed != token.size()) {
      throw IoError(origin + ": line " + std::to_string(line_no) +
                    ": trailing characters after weight: '" + token + "'");
    }
    if (value < 1) {
      throw IoError(origin + ": line " + std::to_string(line_no) +
                    ": weights must be >= 1, got " + std::to_string(value));
    }
    weights.push_back(value);
  }
  if (weights.empty()) throw IoError(origin + ": no weights found");
  try {
    return Instance(std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw IoError(origin + ": " + e.what());
  }
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file: " + path);
  return parse_instance(in, path);
}

void write_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write instance file: " + path);
  for (int i = 0; i < instance.n(); ++i) out << instance.weight(i) << '\n';
  if (!out.flush()) throw IoError("failed writing instance file: " + path);
}

}  // namespace npart
