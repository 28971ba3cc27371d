#pragma once

// Multiclass averaged perceptron over sparse binary features.
//
// The averaged weight of a (feature, label) cell is the mean of its value
// after each of the C training instances seen so far. Averaging is lazy:
// each cell remembers when it last changed and folds the elapsed span into
// its running total on the next change.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace treeseq {

class AveragedPerceptron {
 public:
  explicit AveragedPerceptron(std::size_t num_labels) : num_labels_(num_labels) {}

  std::size_t num_labels() const { return num_labels_; }
  std::size_t num_features() const { return names_.size(); }
  std::uint64_t instances() const { return instances_; }

  // Id of a feature, registering it if new.
  std::uint32_t intern(const std::string& feature) {
    auto [it, inserted] =
        index_.try_emplace(feature, static_cast<std::uint32_t>(names_.size()));
    if (inserted) {
      names_.push_back(feature);
      cells_.resize(cells_.size() + num_labels_);
    }
    return it->second;
  }

  const std::string& feature_name(std::uint32_t id) const { return names_[id]; }

  // Best label among `allowed` (all labels if empty) under the current,
  // non-averaged weights. Ties go to the lowest label index.
  std::size_t best(std::span<const std::uint32_t> features,
                   std::span<const std::uint32_t> allowed) const {
    std::vector<std::int64_t> scores(num_labels_, 0);
    for (auto f : features)
      for (std::size_t l = 0; l < num_labels_; ++l)
        scores[l] += cells_[f * num_labels_ + l].weight;
    std::size_t arg = allowed.empty() ? 0 : allowed.front();
    auto consider = [&](std::size_t l) {
      if (scores[l] > scores[arg]) arg = l;
    };
    if (allowed.empty())
      for (std::size_t l = 0; l < num_labels_; ++l) consider(l);
    else
      for (auto l : allowed) {
        if (scores[l] > scores[arg] || (scores[l] == scores[arg] && l < arg))
          arg = l;
      }
    return arg;
  }

  // One online step. Returns the label predicted before any update.
  std::size_t learn(std::span<const std::uint32_t> features, std::size_t gold,
                    std::span<const std::uint32_t> allowed = {}) {
    ++instances_;
    const std::size_t guess = best(features, allowed);
    if (guess != gold) {
      for (auto f : features) {
        bump(f, gold, +1);
        bump(f, guess, -1);
      }
    }
    return guess;
  }

  // Averaged weights, one row per feature with at least one non-zero cell.
  std::unordered_map<std::string, std::vector<double>> averaged() const {
    std::unordered_map<std::string, std::vector<double>> out;
    if (instances_ == 0) return out;
    const double denom = static_cast<double>(instances_);
    for (std::size_t f = 0; f < names_.size(); ++f) {
      std::vector<double> row(num_labels_, 0.0);
      bool nonzero = false;
      for (std::size_t l = 0; l < num_labels_; ++l) {
        const Cell& c = cells_[f * num_labels_ + l];
        const std::int64_t total =
            c.total + static_cast<std::int64_t>(c.weight) *
                          static_cast<std::int64_t>(instances_ + 1 - c.since);
        row[l] = static_cast<double>(total) / denom;
        nonzero = nonzero || total != 0;
      }
      if (nonzero) out.emplace(names_[f], std::move(row));
    }
    return out;
  }

 private:
  struct Cell {
    std::int32_t weight = 0;
    std::uint64_t since = 1;  // first instance whose snapshot holds `weight`
    std::int64_t total = 0;   // sum of snapshots before `since`
  };

  void bump(std::uint32_t f, std::size_t label, int delta) {
    Cell& c = cells_[f * num_labels_ + label];
    c.total += static_cast<std::int64_t>(c.weight) *
               static_cast<std::int64_t>(instances_ - c.since);
    c.since = instances_;
    c.weight += delta;
  }

  std::size_t num_labels_;
  std::uint64_t instances_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
  std::vector<Cell> cells_;
};

}  // namespace treeseq
