#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>

namespace zsinh {

namespace detail {
template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
}  // namespace detail

// Neumaier's variant of Kahan summation. Order of add() calls is the
// reduction order, so results are reproducible for a fixed index order.
template <class T>
class compensated_sum {
 public:
  compensated_sum& add(T x) {
    T t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
    return *this;
  }
  compensated_sum& operator+=(T x) { return add(x); }
  T value() const { return s_ + c_; }

 private:
  T s_{};
  T c_{};
};

template <class R>
class compensated_sum<std::complex<R>> {
 public:
  compensated_sum& add(std::complex<R> x) {
    re_.add(x.real());
    im_.add(x.imag());
    return *this;
  }
  compensated_sum& operator+=(std::complex<R> x) { return add(x); }
  std::complex<R> value() const { return {re_.value(), im_.value()}; }

 private:
  compensated_sum<R> re_;
  compensated_sum<R> im_;
};

// Tree reduction; error grows like log(n) instead of n.
template <class T>
T pairwise_sum(std::span<const T> v) {
  constexpr std::size_t block = 64;
  if (v.size() <= block) {
    compensated_sum<T> acc;
    for (const T& x : v) acc.add(x);
    return acc.value();
  }
  std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

}  // namespace zsinh
