#pragma once

#include <cstddef>
#include <vector>

namespace mpdn {

// Dense NCHW tensor, innermost axis = width.
template <typename T>
struct Tensor4 {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> data;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_, T fill = T{})
        : n(n_), c(c_), h(h_), w(w_),
          data(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {}

    std::size_t plane_size() const { return static_cast<std::size_t>(h) * w; }
    std::size_t size() const { return data.size(); }

    T* plane(int in, int ic) {
        return data.data() + (static_cast<std::size_t>(in) * c + ic) * plane_size();
    }
    const T* plane(int in, int ic) const {
        return data.data() + (static_cast<std::size_t>(in) * c + ic) * plane_size();
    }
    T* row(int in, int ic, int y) { return plane(in, ic) + static_cast<std::size_t>(y) * w; }
    const T* row(int in, int ic, int y) const {
        return plane(in, ic) + static_cast<std::size_t>(y) * w;
    }

    bool same_shape(const Tensor4& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
};

using Tensor4f = Tensor4<float>;
using Tensor4d = Tensor4<double>;

} // namespace mpdn
