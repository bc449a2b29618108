#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace deepsc::nn {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

template <class T>
struct Node {
  Shape shape;
  std::vector<T> value;
  /// Empty until a backward pass (or zero_grad) allocates it.
  std::vector<T> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  /// Adds this node's grad, pushed through the op, into the parents' grads.
  std::function<void(Node&)> backward;
  std::string name;

  bool is_leaf() const { return parents.empty(); }
  std::vector<T>& grad_buffer() {
    if (grad.empty()) grad.assign(value.size(), T(0));
    return grad;
  }
};

/// Shared handle to a value in a dynamically recorded computation graph.
/// Copies alias the same node.
template <class T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node<T>> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<T> values, bool requires_grad = false);
  /// Trainable leaf.
  static Tensor parameter(Shape shape, std::vector<T> values, std::string name);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t size() const { return node_->value.size(); }
  const std::string& name() const { return node_->name; }

  std::span<const T> values() const { return node_->value; }
  std::span<T> mutable_values() { return node_->value; }
  std::span<const T> grad() const { return node_->grad; }
  std::span<T> mutable_grad() { return node_->grad_buffer(); }
  bool has_grad() const { return !node_->grad.empty(); }
  bool requires_grad() const { return node_->requires_grad; }

  /// Value of a single-element tensor.
  T item() const;

  /// Reverse-mode sweep from this single-element tensor. Leaf gradients are
  /// accumulated; interior gradients are recomputed from zero on every call.
  void backward(T seed = T(1)) const;

  void zero_grad();

  const std::shared_ptr<Node<T>>& node() const { return node_; }

 private:
  std::shared_ptr<Node<T>> node_;
};

/// While alive, ops record no graph: results never require gradients.
/// Thread-local, so evaluation threads do not affect a training thread.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

  static bool enabled();

 private:
  bool previous_;
};

/// Builds the result node of an op. requires_grad is inherited from the inputs;
/// `backward` is only kept when some input needs a gradient.
template <class T>
Tensor<T> make_result(Shape shape, std::vector<T> value, std::vector<std::shared_ptr<Node<T>>> parents,
                      std::function<void(Node<T>&)> backward);

}  // namespace deepsc::nn
