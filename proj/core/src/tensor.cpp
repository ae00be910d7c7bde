#include "nlgame/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlgame {

namespace {

constexpr double kSumTol = 1e-12;

void check_nonnegative(const std::vector<double>& mass) {
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (!(mass[i] >= 0.0) || !std::isfinite(mass[i]))
      throw ShapeError("negative or non-finite mass at cell " + std::to_string(i));
  }
}

}  // namespace

std::string to_string(const AxisLabel& label) {
  return std::string(label.role == Role::Query ? "X" : "U") + "[p" +
         std::to_string(label.party) + ",c" + std::to_string(label.coord) + "]";
}

AlphabetShape::AlphabetShape(std::vector<int> sizes, std::vector<AxisLabel> labels)
    : sizes_(std::move(sizes)), labels_(std::move(labels)) {
  if (sizes_.size() != labels_.size())
    throw ShapeError("axis sizes and labels differ in length");
  cells_ = 1;
  for (int s : sizes_) {
    if (s < 1) throw ShapeError("axis size must be >= 1");
    if (cells_ > static_cast<std::size_t>(cell_budget()) / static_cast<std::size_t>(s))
      throw BudgetError("alphabet exceeds the cell budget");
    cells_ *= static_cast<std::size_t>(s);
  }
  for (std::size_t i = 0; i < labels_.size(); ++i)
    for (std::size_t j = i + 1; j < labels_.size(); ++j)
      if (labels_[i] == labels_[j])
        throw AxisError("duplicate axis label " + to_string(labels_[i]));
}

std::size_t AlphabetShape::flatten(std::span<const int> idx) const {
  if (idx.size() != sizes_.size()) throw ShapeError("index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < sizes_.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= sizes_[k])
      throw ShapeError("index out of range on axis " + std::to_string(k));
    flat = flat * static_cast<std::size_t>(sizes_[k]) + static_cast<std::size_t>(idx[k]);
  }
  return flat;
}

void AlphabetShape::unflatten(std::size_t flat, std::span<int> idx) const {
  if (idx.size() != sizes_.size()) throw ShapeError("index rank mismatch");
  for (std::size_t k = sizes_.size(); k-- > 0;) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(sizes_[k]));
    flat /= static_cast<std::size_t>(sizes_[k]);
  }
}

std::vector<int> AlphabetShape::unflatten(std::size_t flat) const {
  std::vector<int> idx(sizes_.size());
  unflatten(flat, idx);
  return idx;
}

int AlphabetShape::axis_of(const AxisLabel& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  throw AxisError("no axis labeled " + to_string(label));
}

bool AlphabetShape::has_axis(const AxisLabel& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

AlphabetShape AlphabetShape::select(std::span<const int> axes) const {
  std::vector<int> sizes;
  std::vector<AxisLabel> labels;
  sizes.reserve(axes.size());
  labels.reserve(axes.size());
  for (int a : axes) {
    if (a < 0 || a >= rank()) throw AxisError("axis index " + std::to_string(a) + " out of range");
    sizes.push_back(sizes_[a]);
    labels.push_back(labels_[a]);
  }
  return AlphabetShape(std::move(sizes), std::move(labels));
}

AlphabetShape concat(const AlphabetShape& a, const AlphabetShape& b) {
  for (const AxisLabel& l : b.labels())
    if (a.has_axis(l)) throw AxisError("axis label collision on " + to_string(l));
  std::vector<int> sizes = a.sizes();
  sizes.insert(sizes.end(), b.sizes().begin(), b.sizes().end());
  std::vector<AxisLabel> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return AlphabetShape(std::move(sizes), std::move(labels));
}

AlphabetShape make_party_shape(std::span<const int> sizes, Role role, int coord) {
  std::vector<int> s(sizes.begin(), sizes.end());
  std::vector<AxisLabel> labels;
  labels.reserve(s.size());
  for (int p = 0; p < static_cast<int>(s.size()); ++p)
    labels.push_back(AxisLabel{p, coord, role});
  return AlphabetShape(std::move(s), std::move(labels));
}

JointTable JointTable::distribution(AlphabetShape shape, std::vector<double> mass) {
  if (mass.size() != shape.cell_count()) throw ShapeError("mass length != cell count");
  check_nonnegative(mass);
  double s = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (std::abs(s - 1.0) > kSumTol)
    throw ShapeError("distribution mass sums to " + std::to_string(s));
  return JointTable(std::move(shape), std::move(mass), Normalization::Distribution);
}

JointTable JointTable::subnormalized(AlphabetShape shape, std::vector<double> mass) {
  if (mass.size() != shape.cell_count()) throw ShapeError("mass length != cell count");
  check_nonnegative(mass);
  double s = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (s > 1.0 + kSumTol)
    throw ShapeError("subnormalized mass sums to " + std::to_string(s));
  return JointTable(std::move(shape), std::move(mass), Normalization::Subnormalized);
}

JointTable JointTable::uniform(AlphabetShape shape) {
  std::vector<double> mass(shape.cell_count(),
                           1.0 / static_cast<double>(shape.cell_count()));
  return JointTable(std::move(shape), std::move(mass), Normalization::Distribution);
}

double JointTable::total_mass() const {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

Channel Channel::channel(AlphabetShape in, AlphabetShape out,
                         std::vector<double> mass, double tol) {
  if (mass.size() != in.cell_count() * out.cell_count())
    throw ShapeError("channel mass length != input cells * output cells");
  check_nonnegative(mass);
  const std::size_t oc = out.cell_count();
  for (std::size_t x = 0; x < in.cell_count(); ++x) {
    double s = 0.0;
    for (std::size_t u = 0; u < oc; ++u) s += mass[x * oc + u];
    if (std::abs(s - 1.0) > tol)
      throw ShapeError("channel row " + std::to_string(x) + " sums to " + std::to_string(s));
  }
  return Channel(std::move(in), std::move(out), std::move(mass),
                 Normalization::Distribution);
}

Channel Channel::subchannel(AlphabetShape in, AlphabetShape out,
                            std::vector<double> mass, double tol) {
  if (mass.size() != in.cell_count() * out.cell_count())
    throw ShapeError("channel mass length != input cells * output cells");
  check_nonnegative(mass);
  const std::size_t oc = out.cell_count();
  for (std::size_t x = 0; x < in.cell_count(); ++x) {
    double s = 0.0;
    for (std::size_t u = 0; u < oc; ++u) s += mass[x * oc + u];
    if (s > 1.0 + tol)
      throw ShapeError("subchannel row " + std::to_string(x) + " sums to " + std::to_string(s));
  }
  return Channel(std::move(in), std::move(out), std::move(mass),
                 Normalization::Subnormalized);
}

double Channel::row_sum(std::size_t in_flat) const {
  const std::size_t oc = out_.cell_count();
  double s = 0.0;
  for (std::size_t u = 0; u < oc; ++u) s += mass_[in_flat * oc + u];
  return s;
}

namespace {

// Strides of each axis in the row-major flattening of `shape`.
std::vector<std::size_t> strides_of(const AlphabetShape& shape) {
  std::vector<std::size_t> strides(shape.rank(), 1);
  for (int k = shape.rank() - 2; k >= 0; --k)
    strides[k] = strides[k + 1] * static_cast<std::size_t>(shape.size(k + 1));
  return strides;
}

// Maps every flat cell of `shape` to the flat cell of the sub-shape made of
// `axes` (in the given order). Dropped axes are ignored.
std::vector<std::size_t> projection_map(const AlphabetShape& shape,
                                        std::span<const int> axes,
                                        const AlphabetShape& target) {
  const auto strides = strides_of(target);
  std::vector<std::size_t> map(shape.cell_count(), 0);
  std::vector<int> idx(shape.rank());
  for (std::size_t flat = 0; flat < shape.cell_count(); ++flat) {
    shape.unflatten(flat, idx);
    std::size_t t = 0;
    for (std::size_t k = 0; k < axes.size(); ++k)
      t += strides[k] * static_cast<std::size_t>(idx[axes[k]]);
    map[flat] = t;
  }
  return map;
}

}  // namespace

std::vector<std::size_t> flat_projection(const AlphabetShape& shape,
                                         std::span<const int> axes) {
  return projection_map(shape, axes, shape.select(axes));
}

JointTable marginalize(const JointTable& table, std::span<const int> keep_axes) {
  const AlphabetShape& shape = table.shape();
  std::vector<bool> seen(shape.rank(), false);
  for (int a : keep_axes) {
    if (a < 0 || a >= shape.rank())
      throw AxisError("axis index " + std::to_string(a) + " out of range");
    if (seen[a]) throw AxisError("axis " + std::to_string(a) + " listed twice");
    seen[a] = true;
  }
  AlphabetShape target = shape.select(keep_axes);
  const auto map = projection_map(shape, keep_axes, target);
  std::vector<double> out(target.cell_count(), 0.0);
  for (std::size_t flat = 0; flat < shape.cell_count(); ++flat)
    out[map[flat]] += table.at(flat);
  if (table.normalization() == Normalization::Distribution)
    return JointTable::distribution(std::move(target), std::move(out));
  return JointTable::subnormalized(std::move(target), std::move(out));
}

double marginal_mass(const JointTable& table) { return table.total_mass(); }

ConditionResult condition(const JointTable& table, std::span<const int> given_axes) {
  const AlphabetShape& shape = table.shape();
  std::vector<bool> given(shape.rank(), false);
  for (int a : given_axes) {
    if (a < 0 || a >= shape.rank())
      throw AxisError("axis index " + std::to_string(a) + " out of range");
    given[a] = true;
  }
  // Input axes in table order restricted to the given set; output the rest.
  std::vector<int> in_axes, out_axes;
  for (int a = 0; a < shape.rank(); ++a) (given[a] ? in_axes : out_axes).push_back(a);

  AlphabetShape in_shape = shape.select(in_axes);
  AlphabetShape out_shape = shape.select(out_axes);
  const auto in_map = projection_map(shape, in_axes, in_shape);
  const auto out_map = projection_map(shape, out_axes, out_shape);

  std::vector<double> marg(in_shape.cell_count(), 0.0);
  for (std::size_t flat = 0; flat < shape.cell_count(); ++flat)
    marg[in_map[flat]] += table.at(flat);

  const std::size_t oc = out_shape.cell_count();
  std::vector<double> mass(in_shape.cell_count() * oc, 0.0);
  std::vector<std::size_t> undefined;
  for (std::size_t x = 0; x < in_shape.cell_count(); ++x) {
    if (marg[x] <= 0.0) undefined.push_back(x);
  }
  for (std::size_t flat = 0; flat < shape.cell_count(); ++flat) {
    std::size_t x = in_map[flat];
    if (marg[x] > 0.0) mass[x * oc + out_map[flat]] = table.at(flat) / marg[x];
  }
  for (std::size_t x : undefined)
    for (std::size_t u = 0; u < oc; ++u)
      mass[x * oc + u] = 1.0 / static_cast<double>(oc);

  return ConditionResult{
      Channel::channel(std::move(in_shape), std::move(out_shape), std::move(mass), 1e-9),
      std::move(undefined)};
}

JointTable product(const JointTable& a, const JointTable& b) {
  AlphabetShape shape = concat(a.shape(), b.shape());
  if (shape.cell_count() > static_cast<std::size_t>(cell_budget()))
    throw BudgetError("product table would have " + std::to_string(shape.cell_count()) +
                      " cells, over budget");
  const std::size_t bc = b.shape().cell_count();
  std::vector<double> mass(shape.cell_count());
  for (std::size_t i = 0; i < a.shape().cell_count(); ++i) {
    const double ai = a.at(i);
    for (std::size_t j = 0; j < bc; ++j) mass[i * bc + j] = ai * b.at(j);
  }
  if (a.normalization() == Normalization::Distribution &&
      b.normalization() == Normalization::Distribution)
    return JointTable::distribution(std::move(shape), std::move(mass));
  return JointTable::subnormalized(std::move(shape), std::move(mass));
}

JointTable permute_axes(const JointTable& table, std::span<const int> perm) {
  const AlphabetShape& shape = table.shape();
  if (static_cast<int>(perm.size()) != shape.rank())
    throw AxisError("permutation rank mismatch");
  std::vector<bool> seen(shape.rank(), false);
  for (int p : perm) {
    if (p < 0 || p >= shape.rank() || seen[p]) throw AxisError("invalid axis permutation");
    seen[p] = true;
  }
  AlphabetShape target = shape.select(perm);
  const auto map = projection_map(shape, perm, target);
  std::vector<double> mass(target.cell_count());
  for (std::size_t flat = 0; flat < shape.cell_count(); ++flat)
    mass[map[flat]] = table.at(flat);
  if (table.normalization() == Normalization::Distribution)
    return JointTable::distribution(std::move(target), std::move(mass));
  return JointTable::subnormalized(std::move(target), std::move(mass));
}

Rational RationalTable::total() const {
  Rational s = 0;
  for (const Rational& q : mass) s += q;
  return s;
}

JointTable RationalTable::to_distribution() const {
  std::vector<double> d(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) d[i] = to_double(mass[i]);
  return JointTable::distribution(shape, std::move(d));
}

}  // namespace nlgame
