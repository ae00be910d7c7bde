#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlgame/errors.hpp"
#include "nlgame/rational.hpp"

namespace nlgame {

/// Whether an axis carries a query letter or a response letter.
enum class Role : std::uint8_t { Query, Response };

/// Identifies one axis of a product alphabet: which party it belongs to,
/// which repetition coordinate, and whether it is a query or response axis.
struct AxisLabel {
  int party = 0;
  int coord = 0;
  Role role = Role::Query;

  friend bool operator==(const AxisLabel&, const AxisLabel&) = default;
};

std::string to_string(const AxisLabel& label);

/// A product alphabet: per-axis sizes plus labels. Cells are flattened
/// row-major over the declared axis order, so the last axis varies fastest.
class AlphabetShape {
 public:
  AlphabetShape() = default;
  AlphabetShape(std::vector<int> sizes, std::vector<AxisLabel> labels);

  int rank() const { return static_cast<int>(sizes_.size()); }
  int size(int axis) const { return sizes_.at(axis); }
  const std::vector<int>& sizes() const { return sizes_; }
  const AxisLabel& label(int axis) const { return labels_.at(axis); }
  const std::vector<AxisLabel>& labels() const { return labels_; }
  std::size_t cell_count() const { return cells_; }

  std::size_t flatten(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;
  std::vector<int> unflatten(std::size_t flat) const;

  /// Axis position carrying `label`; throws AxisError if absent.
  int axis_of(const AxisLabel& label) const;
  bool has_axis(const AxisLabel& label) const;

  /// Sub-shape made of the given axis positions, in the given order.
  AlphabetShape select(std::span<const int> axes) const;

  friend bool operator==(const AlphabetShape&, const AlphabetShape&) = default;

 private:
  std::vector<int> sizes_;
  std::vector<AxisLabel> labels_;
  std::size_t cells_ = 1;
};

/// Concatenated shape; throws AxisError on a label collision.
AlphabetShape concat(const AlphabetShape& a, const AlphabetShape& b);

/// One axis per party, all at the given coordinate.
AlphabetShape make_party_shape(std::span<const int> sizes, Role role, int coord = 0);

/// Maps every flat cell of `shape` to the flat cell of the sub-shape spanned
/// by `axes` (in the given order).
std::vector<std::size_t> flat_projection(const AlphabetShape& shape,
                                         std::span<const int> axes);

enum class Normalization : std::uint8_t { Distribution, Subnormalized };

/// A dense nonnegative mass table over a product alphabet. Distributions sum
/// to 1 within 1e-12; subnormalized tables sum to at most 1 + 1e-12.
class JointTable {
 public:
  JointTable() = default;

  static JointTable distribution(AlphabetShape shape, std::vector<double> mass);
  static JointTable subnormalized(AlphabetShape shape, std::vector<double> mass);
  static JointTable uniform(AlphabetShape shape);

  const AlphabetShape& shape() const { return shape_; }
  Normalization normalization() const { return norm_; }
  double at(std::size_t flat) const { return mass_[flat]; }
  double at(std::span<const int> idx) const { return mass_[shape_.flatten(idx)]; }
  const std::vector<double>& mass() const { return mass_; }
  std::size_t cell_count() const { return mass_.size(); }
  double total_mass() const;

 private:
  JointTable(AlphabetShape shape, std::vector<double> mass, Normalization norm)
      : shape_(std::move(shape)), mass_(std::move(mass)), norm_(norm) {}

  AlphabetShape shape_;
  std::vector<double> mass_;
  Normalization norm_ = Normalization::Distribution;
};

/// A conditional mass table: for every input cell a mass over output cells,
/// stored input-outer / output-inner. Channels have unit rows within 1e-12;
/// subchannels have rows summing to at most 1 + 1e-12.
class Channel {
 public:
  Channel() = default;

  static Channel channel(AlphabetShape in, AlphabetShape out,
                         std::vector<double> mass, double tol = 1e-12);
  static Channel subchannel(AlphabetShape in, AlphabetShape out,
                            std::vector<double> mass, double tol = 1e-12);

  const AlphabetShape& input_shape() const { return in_; }
  const AlphabetShape& output_shape() const { return out_; }
  Normalization normalization() const { return norm_; }
  double at(std::size_t in_flat, std::size_t out_flat) const {
    return mass_[in_flat * out_.cell_count() + out_flat];
  }
  const std::vector<double>& mass() const { return mass_; }
  double row_sum(std::size_t in_flat) const;

 private:
  Channel(AlphabetShape in, AlphabetShape out, std::vector<double> mass,
          Normalization norm)
      : in_(std::move(in)), out_(std::move(out)), mass_(std::move(mass)),
        norm_(norm) {}

  AlphabetShape in_, out_;
  std::vector<double> mass_;
  Normalization norm_ = Normalization::Distribution;
};

/// Sums out all axes not in keep_axes; preserves the normalization class and
/// the total mass. Axes of the result follow the order given in keep_axes.
JointTable marginalize(const JointTable& table, std::span<const int> keep_axes);

/// Scalar total mass: marginalizing over the empty axis set.
double marginal_mass(const JointTable& table);

struct ConditionResult {
  Channel channel;  // input = given axes (in table order), output = the rest
  std::vector<std::size_t> undefined_inputs;  // zero-marginal input cells
};

/// Conditional of `table` given the axes in given_axes: divides by the
/// marginal over given_axes. Rows with zero conditioning mass get the uniform
/// conditional and are listed in undefined_inputs. The result is a normalized
/// channel even when the table is subnormalized.
ConditionResult condition(const JointTable& table, std::span<const int> given_axes);

/// Cellwise product over disjoint axis labels; mass multiplies.
JointTable product(const JointTable& a, const JointTable& b);

/// Reorders axes; perm[k] is the old axis position that becomes axis k.
JointTable permute_axes(const JointTable& table, std::span<const int> perm);

/// Exact-rational mirror of JointTable for cross-checks and exact LP input.
struct RationalTable {
  AlphabetShape shape;
  std::vector<Rational> mass;

  Rational total() const;
  JointTable to_distribution() const;
};

}  // namespace nlgame
