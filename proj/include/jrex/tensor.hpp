#pragma once

#include <Eigen/Core>

#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jrex/errors.hpp"
#include "jrex/rng.hpp"

namespace jrex {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

std::string shape_str(const Shape& s);

// Dense row-major tensor of doubles. Rank 0 (scalar), 1 and 2 are what the
// graph operations accept; storage itself is rank-agnostic. Eigen backs all
// arithmetic.
class Tensor {
public:
  using Array = Eigen::ArrayXd;
  using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using MapMat = Eigen::Map<MatrixRM>;
  using ConstMapMat = Eigen::Map<const MatrixRM>;

  Tensor() : shape_{}, data_(1) { data_[0] = 0.0; }

  static Tensor zeros(Shape shape);
  static Tensor full(Shape shape, double value);
  static Tensor scalar(double value);
  static Tensor from_vector(std::vector<double> values);                  // rank 1
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows); // rank 2

  const Shape& shape() const { return shape_; }
  Index rank() const { return static_cast<Index>(shape_.size()); }
  Index size() const { return data_.size(); }
  Index extent(Index axis) const { return shape_.at(static_cast<std::size_t>(axis)); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  Array& array() { return data_; }
  const Array& array() const { return data_; }

  double& operator[](Index i) { return data_[i]; }
  double operator[](Index i) const { return data_[i]; }
  double& at(Index r, Index c) { return data_[r * shape_[1] + c]; }
  double at(Index r, Index c) const { return data_[r * shape_[1] + c]; }

  // Rank-2 Eigen view over the row-major buffer.
  MapMat matrix();
  ConstMapMat matrix() const;

  double item() const;
  bool all_finite() const { return data_.allFinite(); }
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  Tensor reshaped(Shape new_shape) const;

private:
  Tensor(Shape shape, Array data) : shape_(std::move(shape)), data_(std::move(data)) {}

  Shape shape_;
  Array data_;
};

class GradStore;

// A node in the reverse-mode differentiation graph: a value plus the
// recipe for pushing an incoming gradient to its parents. Leaf nodes
// (parameters, constants) have no parents. The parent graph is acyclic.
struct Node {
  Tensor value;
  Tensor grad;               // allocated lazily; same shape as value once set
  bool grad_set = false;
  bool requires_grad = false;
  std::string name;          // set for parameters; useful in diagnostics
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&, GradStore&)> backprop;

  bool has_grad() const { return grad_set; }
  void clear_grad();
  // Guarantees grad exists (zero-filled if it was never accumulated).
  Tensor& ensure_grad();
};

using NodePtr = std::shared_ptr<Node>;

// Destination for gradient accumulation during a backward pass. The default
// store writes Node::grad; a scratch store keeps gradients in a side table so
// a subgraph can be differentiated without touching persistent state.
class GradStore {
public:
  virtual ~GradStore() = default;
  virtual void accumulate(Node& node, const Tensor& delta) = 0;
  // Adds delta into the contiguous range [offset, offset + delta.size());
  // keeps embedding-row backward O(dim) instead of O(table).
  virtual void accumulate_slice(Node& node, Index offset, const Tensor& delta) = 0;
  virtual const Tensor* lookup(const Node& node) const = 0;
};

// Accumulates into Node::grad (the store `backward` uses).
class NodeGradStore : public GradStore {
public:
  void accumulate(Node& node, const Tensor& delta) override;
  void accumulate_slice(Node& node, Index offset, const Tensor& delta) override;
  const Tensor* lookup(const Node& node) const override;
};

// Accumulates into a private table keyed by node identity.
class ScratchGradStore : public GradStore {
public:
  void accumulate(Node& node, const Tensor& delta) override;
  void accumulate_slice(Node& node, Index offset, const Tensor& delta) override;
  const Tensor* lookup(const Node& node) const override;
  const std::unordered_map<const Node*, Tensor>& table() const { return grads_; }

private:
  std::unordered_map<const Node*, Tensor> grads_;
};

// Leaf constructors.
NodePtr constant(Tensor value);
NodePtr parameter(Tensor value, std::string name = {});

// --- Core operations (all validate shapes and return fresh nodes) ---

NodePtr matmul(const NodePtr& a, const NodePtr& b);   // [m x k] * [k x n]
NodePtr matvec(const NodePtr& w, const NodePtr& x);   // [m x k] * [k]

// Binary elementwise; identical shapes, or one side a one-element scalar.
NodePtr add(const NodePtr& a, const NodePtr& b);
NodePtr sub(const NodePtr& a, const NodePtr& b);
NodePtr mul(const NodePtr& a, const NodePtr& b);
NodePtr div(const NodePtr& a, const NodePtr& b);

// Unary elementwise.
NodePtr sigmoid(const NodePtr& x);
NodePtr tanh(const NodePtr& x);
NodePtr relu(const NodePtr& x);
NodePtr exp(const NodePtr& x);
NodePtr log(const NodePtr& x);     // DomainError on non-positive input
NodePtr sqrt(const NodePtr& x);    // DomainError on negative input
NodePtr softplus(const NodePtr& x);
NodePtr neg(const NodePtr& x);
NodePtr scale(const NodePtr& x, double c);
NodePtr shift(const NodePtr& x, double c);

// Structure.
NodePtr concat(const std::vector<NodePtr>& parts, Index axis);
NodePtr reshape(const NodePtr& x, Shape new_shape);
NodePtr select_row(const NodePtr& x, Index row);           // [r x c] -> [c]
NodePtr select_item(const NodePtr& x, Index i);            // [n] -> scalar
NodePtr stack_rows(const std::vector<NodePtr>& rows);      // n x [c] -> [n x c]

// Reductions. axis == nullopt reduces everything to a rank-0 scalar;
// otherwise reduces one axis of a rank-1/rank-2 input.
NodePtr sum(const NodePtr& x, std::optional<Index> axis = std::nullopt);
NodePtr mean(const NodePtr& x, std::optional<Index> axis = std::nullopt);
NodePtr max(const NodePtr& x, std::optional<Index> axis = std::nullopt);
NodePtr logsumexp(const NodePtr& x, std::optional<Index> axis = std::nullopt);

NodePtr dot(const NodePtr& a, const NodePtr& b);   // sum(a * b)

// Inverted-dropout mask: elements are 0 with probability rate, else
// 1 / (1 - rate). rate must lie in [0, 1).
Tensor dropout_mask(const Shape& shape, double rate, Rng& rng);

// Reverse-mode sweep from a one-element root. Every reachable node with
// requires_grad accumulates d(root)/d(node) into its grad; repeated calls
// without clear_grad() keep accumulating.
void backward(const NodePtr& root);

// Like backward, but gradients go to an external table instead of the nodes,
// scaled fold into leaf parameters is the caller's business.
void backward_into(const NodePtr& root, const Tensor& seed, GradStore& store);

// Clears grads of every node reachable from root.
void zero_grad(const NodePtr& root);

} // namespace jrex
