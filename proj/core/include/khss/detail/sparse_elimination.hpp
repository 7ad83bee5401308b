// Sparse Gaussian elimination with Markowitz pivoting and optional history.
//
// The history is what turns a rank computation into a chain-homotopy
// retraction: every pivot records the pivot row and the pivot column as they
// looked at that moment, which is enough to replay projections and to lift
// surviving generators back to cycles of the original complex.
#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace khss::detail {

template <class V>
using SparseVec = std::vector<std::pair<std::uint32_t, V>>;

template <class V>
struct EliminationStep {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  V pivot{};
  SparseVec<V> row_entries;  // pivot row at pivot time, including the pivot column
  SparseVec<V> col_entries;  // other rows with a nonzero in the pivot column
};

template <class F>
class SparseEliminator {
 public:
  using V = typename F::value_type;

  SparseEliminator(F field, std::uint32_t n_rows, std::uint32_t n_cols, bool keep_history)
      : field_(field),
        keep_history_(keep_history),
        rows_(n_rows),
        row_active_(n_rows, 1),
        row_pivot_(n_rows, 0),
        cols_(n_cols),
        col_count_(n_cols, 0),
        col_pivot_(n_cols, 0),
        stamp_(n_rows, 0) {}

  // entries must be sorted by column with nonzero values.
  void set_row(std::uint32_t r, SparseVec<V> entries) {
    for (const auto& [c, v] : entries) {
      cols_[c].push_back(r);
      ++col_count_[c];
    }
    rows_[r] = std::move(entries);
  }

  // Excludes a row before run(); used for rows already cancelled against the
  // previous differential.
  void drop_row(std::uint32_t r) {
    if (!row_active_[r]) return;
    row_active_[r] = 0;
    for (const auto& [c, v] : rows_[r]) --col_count_[c];
    rows_[r].clear();
  }

  std::size_t run() {
    for (std::uint32_t c = 0; c < col_count_.size(); ++c) {
      if (col_count_[c] > 0) queue_.insert({col_count_[c], c});
    }
    std::size_t rank = 0;
    while (!queue_.empty()) {
      const std::uint32_t y = queue_.begin()->second;
      compact_column(y);
      std::uint32_t x = 0;
      std::size_t best = SIZE_MAX;
      for (std::uint32_t r : cols_[y]) {
        const std::size_t len = rows_[r].size();
        if (len < best || (len == best && r < x)) {
          best = len;
          x = r;
        }
      }
      pivot(x, y);
      ++rank;
    }
    rank_ = rank;
    return rank;
  }

  [[nodiscard]] std::size_t rank() const { return rank_; }
  [[nodiscard]] const std::vector<EliminationStep<V>>& history() const { return history_; }
  [[nodiscard]] bool row_is_pivot(std::uint32_t r) const { return row_pivot_[r] != 0; }
  [[nodiscard]] bool row_is_active(std::uint32_t r) const { return row_active_[r] != 0 || row_pivot_[r] != 0; }
  [[nodiscard]] bool col_is_pivot(std::uint32_t c) const { return col_pivot_[c] != 0; }

 private:
  void change_count(std::uint32_t c, int delta) {
    if (col_pivot_[c]) return;
    if (col_count_[c] > 0) queue_.erase({col_count_[c], c});
    col_count_[c] = static_cast<std::uint32_t>(static_cast<int>(col_count_[c]) + delta);
    if (col_count_[c] > 0) queue_.insert({col_count_[c], c});
  }

  bool row_has(std::uint32_t r, std::uint32_t c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::uint32_t key) { return e.first < key; });
    return it != row.end() && it->first == c;
  }

  const V& row_value(std::uint32_t r, std::uint32_t c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::uint32_t key) { return e.first < key; });
    return it->second;
  }

  // Removes stale and duplicate row references from a column list.
  void compact_column(std::uint32_t c) {
    ++stamp_counter_;
    auto& list = cols_[c];
    std::size_t out = 0;
    for (std::uint32_t r : list) {
      if (!row_active_[r] || stamp_[r] == stamp_counter_ || !row_has(r, c)) continue;
      stamp_[r] = stamp_counter_;
      list[out++] = r;
    }
    list.resize(out);
  }

  void pivot(std::uint32_t x, std::uint32_t y) {
    const V c = row_value(x, y);
    const V c_inv = field_.inv(c);

    EliminationStep<V> step;
    step.row = x;
    step.col = y;
    step.pivot = c;

    SparseVec<V> pivot_row = std::move(rows_[x]);
    rows_[x].clear();
    row_active_[x] = 0;
    row_pivot_[x] = 1;
    col_pivot_[y] = 1;
    queue_.erase({col_count_[y], y});

    for (const auto& [col, v] : pivot_row) {
      if (col != y) change_count(col, -1);
    }

    std::vector<std::uint32_t> targets;
    targets.reserve(cols_[y].size());
    for (std::uint32_t r : cols_[y]) {
      if (r != x) targets.push_back(r);
    }
    if (keep_history_) step.col_entries.reserve(targets.size());

    SparseVec<V> merged;
    for (std::uint32_t r : targets) {
      const V factor = field_.mul(row_value(r, y), c_inv);
      if (keep_history_) step.col_entries.emplace_back(r, row_value(r, y));
      auto& row = rows_[r];
      merged.clear();
      merged.reserve(row.size() + pivot_row.size());
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < row.size() || j < pivot_row.size()) {
        if (j == pivot_row.size() || (i < row.size() && row[i].first < pivot_row[j].first)) {
          merged.push_back(std::move(row[i]));
          ++i;
        } else if (i == row.size() || pivot_row[j].first < row[i].first) {
          const std::uint32_t col = pivot_row[j].first;
          merged.emplace_back(col, field_.neg(field_.mul(factor, pivot_row[j].second)));
          if (col != y) {
            cols_[col].push_back(r);
            change_count(col, +1);
          }
          ++j;
        } else {
          const std::uint32_t col = row[i].first;
          V nv = field_.sub(row[i].second, field_.mul(factor, pivot_row[j].second));
          if (!field_.is_zero(nv)) {
            merged.emplace_back(col, std::move(nv));
          } else if (col != y) {
            change_count(col, -1);
          }
          ++i;
          ++j;
        }
      }
      row.swap(merged);
    }
    cols_[y].clear();

    if (keep_history_) {
      step.row_entries = std::move(pivot_row);
      history_.push_back(std::move(step));
    }
  }

  F field_;
  bool keep_history_;
  std::vector<SparseVec<V>> rows_;
  std::vector<char> row_active_;
  std::vector<char> row_pivot_;
  std::vector<std::vector<std::uint32_t>> cols_;
  std::vector<std::uint32_t> col_count_;
  std::vector<char> col_pivot_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t stamp_counter_ = 0;
  std::set<std::pair<std::uint32_t, std::uint32_t>> queue_;
  std::vector<EliminationStep<V>> history_;
  std::size_t rank_ = 0;
};

}  // namespace khss::detail
