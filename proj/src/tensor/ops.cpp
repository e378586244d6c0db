#include "deepcva/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace deepcva::tensor {

using detail::make_result;
using detail::Node;

namespace {

[[noreturn]] void mismatch(const char* op, const Shape& a, const Shape& b) {
  throw ShapeMismatch(std::string(op) + ": incompatible shapes " + shape_str(a) + " and " +
                      shape_str(b));
}

void require_rank(const char* op, const Tensor& t, std::size_t rank) {
  if (t.rank() != rank) {
    throw ShapeMismatch(std::string(op) + ": expected rank " + std::to_string(rank) +
                        " tensor, got " + shape_str(t.shape()));
  }
}

Node& parent(Node& self, std::size_t i) { return *self.parents[i]; }

template <typename Fwd, typename Deriv>
Tensor unary(const Tensor& a, Fwd fwd, Deriv deriv_from_output) {
  std::vector<double> out(a.numel());
  auto in = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(in[i]);
  return make_result(a.shape(), std::move(out), {a}, [deriv_from_output](Node& self) {
    auto& pa = parent(self, 0);
    if (!pa.requires_grad) return;
    pa.ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      pa.grad[i] += self.grad[i] * deriv_from_output(pa.value[i], self.value[i]);
    }
  });
}

std::size_t last_dim(const Tensor& t) { return t.shape().empty() ? 1 : t.shape().back(); }

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank("matmul", a, 2);
  require_rank("matmul", b, 2);
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) mismatch("matmul", a.shape(), b.shape());
  std::vector<double> out(m * n, 0.0);
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < m; ++i) {
    double* row = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double x = av[i * k + p];
      if (x == 0.0) continue;
      const double* brow = bv.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += x * brow[j];
    }
  }
  return make_result({m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    auto& pa = parent(self, 0);
    auto& pb = parent(self, 1);
    const double* g = self.grad.data();
    if (pa.requires_grad) {
      pa.ensure_grad();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double* brow = pb.value.data() + p * n;
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * brow[j];
          pa.grad[i * k + p] += acc;
        }
      }
    }
    if (pb.requires_grad) {
      pb.ensure_grad();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double x = pa.value[i * k + p];
          if (x == 0.0) continue;
          double* gb = pb.grad.data() + p * n;
          for (std::size_t j = 0; j < n; ++j) gb[j] += x * g[i * n + j];
        }
      }
    }
  });
}

namespace {

enum class Binary { kAdd, kSub, kMul };

Tensor binary(const char* name, Binary kind, const Tensor& a, const Tensor& b) {
  const bool same = a.shape() == b.shape();
  const bool bias = !same && kind == Binary::kAdd && b.numel() == last_dim(a) && a.numel() > 0;
  if (!same && !bias) mismatch(name, a.shape(), b.shape());
  const std::size_t width = b.numel();
  std::vector<double> out(a.numel());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double y = bv[same ? i : i % width];
    switch (kind) {
      case Binary::kAdd: out[i] = av[i] + y; break;
      case Binary::kSub: out[i] = av[i] - y; break;
      case Binary::kMul: out[i] = av[i] * y; break;
    }
  }
  return make_result(a.shape(), std::move(out), {a, b}, [kind, same, width](Node& self) {
    auto& pa = parent(self, 0);
    auto& pb = parent(self, 1);
    const auto& g = self.grad;
    if (pa.requires_grad) {
      pa.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        pa.grad[i] += kind == Binary::kMul ? g[i] * pb.value[i] : g[i];
      }
    }
    if (pb.requires_grad) {
      pb.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t j = same ? i : i % width;
        switch (kind) {
          case Binary::kAdd: pb.grad[j] += g[i]; break;
          case Binary::kSub: pb.grad[j] -= g[i]; break;
          case Binary::kMul: pb.grad[j] += g[i] * pa.value[i]; break;
        }
      }
    }
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) { return binary("add", Binary::kAdd, a, b); }
Tensor sub(const Tensor& a, const Tensor& b) { return binary("sub", Binary::kSub, a, b); }
Tensor mul(const Tensor& a, const Tensor& b) { return binary("mul", Binary::kMul, a, b); }

Tensor scale(const Tensor& a, double factor) {
  return unary(
      a, [factor](double x) { return factor * x; }, [factor](double, double) { return factor; });
}

Tensor one_minus(const Tensor& a) {
  return unary(
      a, [](double x) { return 1.0 - x; }, [](double, double) { return -1.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary(
      a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor relu(const Tensor& a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

namespace {

void softmax_backward(Node& self, std::size_t width) {
  auto& pa = parent(self, 0);
  if (!pa.requires_grad) return;
  pa.ensure_grad();
  const std::size_t rows = width ? self.value.size() / width : 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* y = self.value.data() + r * width;
    const double* g = self.grad.data() + r * width;
    double dot = 0.0;
    for (std::size_t c = 0; c < width; ++c) dot += g[c] * y[c];
    for (std::size_t c = 0; c < width; ++c) pa.grad[r * width + c] += y[c] * (g[c] - dot);
  }
}

}  // namespace

Tensor softmax(const Tensor& a) {
  const std::size_t width = last_dim(a);
  std::vector<double> out(a.numel());
  auto in = a.values();
  for (std::size_t r = 0; width && r < out.size() / width; ++r) {
    const double* x = in.data() + r * width;
    double* y = out.data() + r * width;
    const double mx = *std::max_element(x, x + width);
    double total = 0.0;
    for (std::size_t c = 0; c < width; ++c) total += (y[c] = std::exp(x[c] - mx));
    for (std::size_t c = 0; c < width; ++c) y[c] /= total;
  }
  return make_result(a.shape(), std::move(out), {a},
                     [width](Node& self) { softmax_backward(self, width); });
}

Tensor masked_softmax(const Tensor& a, std::span<const std::uint8_t> mask) {
  if (mask.size() != a.numel()) {
    throw ShapeMismatch("masked_softmax: mask of " + std::to_string(mask.size()) +
                        " entries for shape " + shape_str(a.shape()));
  }
  const std::size_t width = last_dim(a);
  const std::size_t rows = width ? a.numel() / width : 0;
  std::vector<double> out(a.numel(), 0.0);
  std::vector<std::uint8_t> fallback(rows, 0);
  auto in = a.values();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = in.data() + r * width;
    const std::uint8_t* m = mask.data() + r * width;
    double* y = out.data() + r * width;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < width; ++c) {
      if (m[c]) mx = std::max(mx, x[c]);
    }
    if (mx == -std::numeric_limits<double>::infinity()) {
      fallback[r] = 1;
      for (std::size_t c = 0; c < width; ++c) y[c] = 1.0 / static_cast<double>(width);
      continue;
    }
    double total = 0.0;
    for (std::size_t c = 0; c < width; ++c) {
      if (m[c]) total += (y[c] = std::exp(x[c] - mx));
    }
    for (std::size_t c = 0; c < width; ++c) y[c] /= total;
  }
  return make_result(a.shape(), std::move(out), {a},
                     [width, fallback = std::move(fallback)](Node& self) {
                       // Fallback rows are constant and contribute no gradient.
                       std::vector<double> saved;
                       bool any = std::any_of(fallback.begin(), fallback.end(),
                                              [](std::uint8_t f) { return f != 0; });
                       if (any) {
                         saved = self.grad;
                         for (std::size_t r = 0; r < fallback.size(); ++r) {
                           if (fallback[r]) {
                             std::fill_n(self.grad.begin() + static_cast<std::ptrdiff_t>(r * width),
                                         width, 0.0);
                           }
                         }
                       }
                       softmax_backward(self, width);
                       if (any) self.grad = std::move(saved);
                     });
}

Tensor concat(std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) throw ShapeMismatch("concat: no inputs");
  if (axis > 1) throw ShapeMismatch("concat: axis must be 0 or 1");
  for (const auto& p : parts) require_rank("concat", p, 2);
  const std::size_t other = parts[0].dim(1 - axis);
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.dim(1 - axis) != other) mismatch("concat", parts[0].shape(), p.shape());
    total += p.dim(axis);
  }
  const Shape shape = axis == 0 ? Shape{total, other} : Shape{other, total};
  std::vector<double> out(total * other);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    offsets.push_back(offset);
    auto v = p.values();
    const std::size_t w = p.dim(axis);
    if (axis == 0) {
      std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(offset * other));
    } else {
      for (std::size_t r = 0; r < other; ++r) {
        std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(r * w), w,
                    out.begin() + static_cast<std::ptrdiff_t>(r * total + offset));
      }
    }
    offset += w;
  }
  std::vector<Tensor> parents(parts.begin(), parts.end());
  return make_result(shape, std::move(out), std::move(parents),
                     [axis, other, total, offsets](Node& self) {
                       for (std::size_t i = 0; i < self.parents.size(); ++i) {
                         auto& p = parent(self, i);
                         if (!p.requires_grad) continue;
                         p.ensure_grad();
                         const std::size_t w = p.shape[axis];
                         if (axis == 0) {
                           for (std::size_t j = 0; j < w * other; ++j) {
                             p.grad[j] += self.grad[offsets[i] * other + j];
                           }
                         } else {
                           for (std::size_t r = 0; r < other; ++r) {
                             for (std::size_t c = 0; c < w; ++c) {
                               p.grad[r * w + c] += self.grad[r * total + offsets[i] + c];
                             }
                           }
                         }
                       }
                     });
}

Tensor slice(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length) {
  require_rank("slice", a, 2);
  if (axis > 1 || start + length > a.dim(axis)) {
    throw ShapeMismatch("slice: range [" + std::to_string(start) + ", " +
                        std::to_string(start + length) + ") on axis " + std::to_string(axis) +
                        " exceeds shape " + shape_str(a.shape()));
  }
  const std::size_t rows = a.dim(0), cols = a.dim(1);
  const Shape shape = axis == 0 ? Shape{length, cols} : Shape{rows, length};
  std::vector<double> out(numel_of(shape));
  auto v = a.values();
  auto index = [=](std::size_t r, std::size_t c) {
    return axis == 0 ? (start + r) * cols + c : r * cols + start + c;
  };
  const std::size_t out_rows = shape[0], out_cols = shape[1];
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) out[r * out_cols + c] = v[index(r, c)];
  }
  return make_result(shape, std::move(out), {a}, [index, out_rows, out_cols](Node& self) {
    auto& pa = parent(self, 0);
    if (!pa.requires_grad) return;
    pa.ensure_grad();
    for (std::size_t r = 0; r < out_rows; ++r) {
      for (std::size_t c = 0; c < out_cols; ++c) {
        pa.grad[index(r, c)] += self.grad[r * out_cols + c];
      }
    }
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (numel_of(shape) != a.numel()) mismatch("reshape", a.shape(), shape);
  std::vector<double> out(a.values().begin(), a.values().end());
  return make_result(std::move(shape), std::move(out), {a}, [](Node& self) {
    auto& pa = parent(self, 0);
    if (!pa.requires_grad) return;
    pa.ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) pa.grad[i] += self.grad[i];
  });
}

Tensor embedding_lookup(const Tensor& table, std::span<const std::int32_t> ids) {
  require_rank("embedding_lookup", table, 2);
  const std::size_t vocab = table.dim(0), width = table.dim(1);
  std::vector<double> out(ids.size() * width);
  auto v = table.values();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= vocab) {
      throw std::out_of_range("embedding_lookup: id " + std::to_string(ids[i]) +
                              " outside vocabulary of " + std::to_string(vocab));
    }
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(ids[i] * width), width,
                out.begin() + static_cast<std::ptrdiff_t>(i * width));
  }
  std::vector<std::int32_t> saved(ids.begin(), ids.end());
  return make_result({ids.size(), width}, std::move(out), {table},
                     [width, saved = std::move(saved)](Node& self) {
                       auto& pt = parent(self, 0);
                       if (!pt.requires_grad) return;
                       pt.ensure_grad();
                       for (std::size_t i = 0; i < saved.size(); ++i) {
                         const std::size_t base = static_cast<std::size_t>(saved[i]) * width;
                         for (std::size_t c = 0; c < width; ++c) {
                           pt.grad[base + c] += self.grad[i * width + c];
                         }
                       }
                     });
}

Tensor conv1d(const Tensor& x, const Tensor& filters, const Tensor& bias) {
  require_rank("conv1d", x, 3);
  require_rank("conv1d", filters, 3);
  const std::size_t batch = x.dim(0), n = x.dim(1), width = x.dim(2);
  const std::size_t k = filters.dim(0), f = filters.dim(2);
  if (filters.dim(1) != width || k == 0 || k > n) mismatch("conv1d", x.shape(), filters.shape());
  if (bias.numel() != f) mismatch("conv1d", filters.shape(), bias.shape());
  const std::size_t steps = n - k + 1, window = k * width;
  std::vector<double> out(batch * steps * f);
  auto xv = x.values();
  auto wv = filters.values();
  auto bv = bias.values();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < steps; ++t) {
      // Rows t..t+k-1 of sample b are contiguous, so the window is a flat span.
      const double* win = xv.data() + (b * n + t) * width;
      double* y = out.data() + (b * steps + t) * f;
      std::copy(bv.begin(), bv.end(), y);
      for (std::size_t p = 0; p < window; ++p) {
        const double xw = win[p];
        if (xw == 0.0) continue;
        const double* wrow = wv.data() + p * f;
        for (std::size_t c = 0; c < f; ++c) y[c] += xw * wrow[c];
      }
    }
  }
  return make_result(
      {batch, steps, f}, std::move(out), {x, filters, bias},
      [batch, n, width, steps, window, f](Node& self) {
        auto& px = parent(self, 0);
        auto& pw = parent(self, 1);
        auto& pb = parent(self, 2);
        if (px.requires_grad) px.ensure_grad();
        if (pw.requires_grad) pw.ensure_grad();
        if (pb.requires_grad) pb.ensure_grad();
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t t = 0; t < steps; ++t) {
            const std::size_t base = (b * n + t) * width;
            const double* g = self.grad.data() + (b * steps + t) * f;
            if (pb.requires_grad) {
              for (std::size_t c = 0; c < f; ++c) pb.grad[c] += g[c];
            }
            for (std::size_t p = 0; p < window; ++p) {
              const double* wrow = pw.value.data() + p * f;
              if (px.requires_grad) {
                double acc = 0.0;
                for (std::size_t c = 0; c < f; ++c) acc += wrow[c] * g[c];
                px.grad[base + p] += acc;
              }
              if (pw.requires_grad) {
                const double xw = px.value[base + p];
                if (xw == 0.0) continue;
                double* gw = pw.grad.data() + p * f;
                for (std::size_t c = 0; c < f; ++c) gw[c] += xw * g[c];
              }
            }
          }
        }
      });
}

Tensor time_step(const Tensor& x, std::size_t t) {
  require_rank("time_step", x, 3);
  const std::size_t batch = x.dim(0), steps = x.dim(1), width = x.dim(2);
  if (t >= steps) {
    throw ShapeMismatch("time_step: t=" + std::to_string(t) + " outside " + shape_str(x.shape()));
  }
  std::vector<double> out(batch * width);
  auto v = x.values();
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>((b * steps + t) * width), width,
                out.begin() + static_cast<std::ptrdiff_t>(b * width));
  }
  return make_result({batch, width}, std::move(out), {x}, [batch, steps, width, t](Node& self) {
    auto& px = parent(self, 0);
    if (!px.requires_grad) return;
    px.ensure_grad();
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t c = 0; c < width; ++c) {
        px.grad[(b * steps + t) * width + c] += self.grad[b * width + c];
      }
    }
  });
}

Tensor stack_steps(std::span<const Tensor> steps) {
  if (steps.empty()) throw ShapeMismatch("stack_steps: no inputs");
  for (const auto& s : steps) {
    require_rank("stack_steps", s, 2);
    if (s.shape() != steps[0].shape()) mismatch("stack_steps", steps[0].shape(), s.shape());
  }
  const std::size_t batch = steps[0].dim(0), width = steps[0].dim(1), count = steps.size();
  std::vector<double> out(batch * count * width);
  for (std::size_t t = 0; t < count; ++t) {
    auto v = steps[t].values();
    for (std::size_t b = 0; b < batch; ++b) {
      std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(b * width), width,
                  out.begin() + static_cast<std::ptrdiff_t>((b * count + t) * width));
    }
  }
  std::vector<Tensor> parents(steps.begin(), steps.end());
  return make_result({batch, count, width}, std::move(out), std::move(parents),
                     [batch, count, width](Node& self) {
                       for (std::size_t t = 0; t < count; ++t) {
                         auto& p = parent(self, t);
                         if (!p.requires_grad) continue;
                         p.ensure_grad();
                         for (std::size_t b = 0; b < batch; ++b) {
                           for (std::size_t c = 0; c < width; ++c) {
                             p.grad[b * width + c] += self.grad[(b * count + t) * width + c];
                           }
                         }
                       }
                     });
}

Tensor gather_steps(const Tensor& x, std::span<const std::size_t> index) {
  require_rank("gather_steps", x, 3);
  const std::size_t batch = x.dim(0), steps = x.dim(1), width = x.dim(2);
  if (index.size() != batch) {
    throw ShapeMismatch("gather_steps: " + std::to_string(index.size()) + " indices for " +
                        shape_str(x.shape()));
  }
  std::vector<std::size_t> rows(index.begin(), index.end());
  std::vector<double> out(batch * width);
  auto v = x.values();
  for (std::size_t b = 0; b < batch; ++b) {
    if (rows[b] >= steps) throw ShapeMismatch("gather_steps: index beyond sequence length");
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>((b * steps + rows[b]) * width), width,
                out.begin() + static_cast<std::ptrdiff_t>(b * width));
  }
  return make_result({batch, width}, std::move(out), {x},
                     [steps, width, rows = std::move(rows)](Node& self) {
                       auto& px = parent(self, 0);
                       if (!px.requires_grad) return;
                       px.ensure_grad();
                       for (std::size_t b = 0; b < rows.size(); ++b) {
                         for (std::size_t c = 0; c < width; ++c) {
                           px.grad[(b * steps + rows[b]) * width + c] += self.grad[b * width + c];
                         }
                       }
                     });
}

Tensor weighted_sum(const Tensor& weights, const Tensor& x) {
  require_rank("weighted_sum", weights, 2);
  require_rank("weighted_sum", x, 3);
  const std::size_t batch = x.dim(0), steps = x.dim(1), width = x.dim(2);
  if (weights.dim(0) != batch || weights.dim(1) != steps) {
    mismatch("weighted_sum", weights.shape(), x.shape());
  }
  std::vector<double> out(batch * width, 0.0);
  auto wv = weights.values();
  auto xv = x.values();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < steps; ++t) {
      const double w = wv[b * steps + t];
      const double* row = xv.data() + (b * steps + t) * width;
      for (std::size_t c = 0; c < width; ++c) out[b * width + c] += w * row[c];
    }
  }
  return make_result({batch, width}, std::move(out), {weights, x},
                     [batch, steps, width](Node& self) {
                       auto& pw = parent(self, 0);
                       auto& px = parent(self, 1);
                       if (pw.requires_grad) pw.ensure_grad();
                       if (px.requires_grad) px.ensure_grad();
                       for (std::size_t b = 0; b < batch; ++b) {
                         const double* g = self.grad.data() + b * width;
                         for (std::size_t t = 0; t < steps; ++t) {
                           const std::size_t row = (b * steps + t) * width;
                           if (pw.requires_grad) {
                             double acc = 0.0;
                             for (std::size_t c = 0; c < width; ++c) acc += g[c] * px.value[row + c];
                             pw.grad[b * steps + t] += acc;
                           }
                           if (px.requires_grad) {
                             const double w = pw.value[b * steps + t];
                             for (std::size_t c = 0; c < width; ++c) px.grad[row + c] += w * g[c];
                           }
                         }
                       }
                     });
}

Tensor dropout(const Tensor& a, double rate, Rng& rng, bool train) {
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout: rate must be in [0, 1)");
  if (!train || rate == 0.0) return a;
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(a.numel());
  for (auto& m : mask) m = uniform01(rng) < rate ? 0.0 : keep_scale;
  std::vector<double> out(a.numel());
  auto v = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] * mask[i];
  return make_result(a.shape(), std::move(out), {a}, [mask = std::move(mask)](Node& self) {
    auto& pa = parent(self, 0);
    if (!pa.requires_grad) return;
    pa.ensure_grad();
    for (std::size_t i = 0; i < mask.size(); ++i) pa.grad[i] += self.grad[i] * mask[i];
  });
}

Tensor batch_norm(const Tensor& a, const Tensor& gamma, const Tensor& beta, BatchNormState& state,
                  bool train) {
  const std::size_t width = last_dim(a);
  if (gamma.numel() != width || beta.numel() != width || state.running_mean.numel() != width ||
      state.running_var.numel() != width) {
    mismatch("batch_norm", a.shape(), gamma.shape());
  }
  const std::size_t rows = width ? a.numel() / width : 0;
  if (rows == 0) throw ShapeMismatch("batch_norm: empty input " + shape_str(a.shape()));
  auto x = a.values();
  std::vector<double> mu(width, 0.0), inv_std(width, 0.0);
  if (train) {
    std::vector<double> var(width, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < width; ++c) mu[c] += x[r * width + c];
    }
    for (auto& m : mu) m /= static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double d = x[r * width + c] - mu[c];
        var[c] += d * d;
      }
    }
    auto rm = state.running_mean.mutable_values();
    auto rv = state.running_var.mutable_values();
    const double unbias = rows > 1 ? static_cast<double>(rows) / static_cast<double>(rows - 1) : 1.0;
    for (std::size_t c = 0; c < width; ++c) {
      var[c] /= static_cast<double>(rows);
      inv_std[c] = 1.0 / std::sqrt(var[c] + state.eps);
      rm[c] = (1.0 - state.momentum) * rm[c] + state.momentum * mu[c];
      rv[c] = (1.0 - state.momentum) * rv[c] + state.momentum * var[c] * unbias;
    }
  } else {
    auto rm = state.running_mean.values();
    auto rv = state.running_var.values();
    for (std::size_t c = 0; c < width; ++c) {
      mu[c] = rm[c];
      inv_std[c] = 1.0 / std::sqrt(rv[c] + state.eps);
    }
  }
  std::vector<double> xhat(a.numel()), out(a.numel());
  auto g = gamma.values();
  auto b = beta.values();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t i = r * width + c;
      xhat[i] = (x[i] - mu[c]) * inv_std[c];
      out[i] = g[c] * xhat[i] + b[c];
    }
  }
  return make_result(
      a.shape(), std::move(out), {a, gamma, beta},
      [rows, width, train, inv_std = std::move(inv_std), xhat = std::move(xhat)](Node& self) {
        auto& px = parent(self, 0);
        auto& pg = parent(self, 1);
        auto& pb = parent(self, 2);
        const auto& dy = self.grad;
        if (pg.requires_grad) {
          pg.ensure_grad();
          for (std::size_t i = 0; i < dy.size(); ++i) pg.grad[i % width] += dy[i] * xhat[i];
        }
        if (pb.requires_grad) {
          pb.ensure_grad();
          for (std::size_t i = 0; i < dy.size(); ++i) pb.grad[i % width] += dy[i];
        }
        if (!px.requires_grad) return;
        px.ensure_grad();
        if (!train) {
          for (std::size_t i = 0; i < dy.size(); ++i) {
            px.grad[i] += dy[i] * pg.value[i % width] * inv_std[i % width];
          }
          return;
        }
        std::vector<double> sum_dxhat(width, 0.0), sum_dxhat_xhat(width, 0.0);
        for (std::size_t i = 0; i < dy.size(); ++i) {
          const double d = dy[i] * pg.value[i % width];
          sum_dxhat[i % width] += d;
          sum_dxhat_xhat[i % width] += d * xhat[i];
        }
        const double count = static_cast<double>(rows);
        for (std::size_t i = 0; i < dy.size(); ++i) {
          const std::size_t c = i % width;
          const double d = dy[i] * pg.value[c];
          px.grad[i] += inv_std[c] / count *
                        (count * d - sum_dxhat[c] - xhat[i] * sum_dxhat_xhat[c]);
        }
      });
}

namespace {

void check_labels(const char* op, const Tensor& t, std::span<const std::int32_t> labels) {
  require_rank(op, t, 2);
  if (labels.size() != t.dim(0)) {
    throw ShapeMismatch(std::string(op) + ": " + std::to_string(labels.size()) +
                        " labels for shape " + shape_str(t.shape()));
  }
  for (auto y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= t.dim(1)) {
      throw std::out_of_range(std::string(op) + ": label " + std::to_string(y) +
                              " outside [0, " + std::to_string(t.dim(1)) + ")");
    }
  }
}

}  // namespace

Tensor cross_entropy(const Tensor& logits, std::span<const std::int32_t> labels) {
  check_labels("cross_entropy", logits, labels);
  const std::size_t rows = logits.dim(0), width = logits.dim(1);
  std::vector<double> probs(rows * width);
  auto x = logits.values();
  double loss = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = x.data() + r * width;
    double* p = probs.data() + r * width;
    const double mx = *std::max_element(row, row + width);
    double total = 0.0;
    for (std::size_t c = 0; c < width; ++c) total += (p[c] = std::exp(row[c] - mx));
    for (std::size_t c = 0; c < width; ++c) p[c] /= total;
    loss -= std::log(std::max(p[labels[r]], kProbabilityFloor));
  }
  loss /= static_cast<double>(rows);
  std::vector<std::int32_t> saved(labels.begin(), labels.end());
  return make_result({1}, {loss}, {logits},
                     [rows, width, probs = std::move(probs), saved = std::move(saved)](Node& self) {
                       auto& pl = parent(self, 0);
                       if (!pl.requires_grad) return;
                       pl.ensure_grad();
                       const double g = self.grad[0] / static_cast<double>(rows);
                       for (std::size_t r = 0; r < rows; ++r) {
                         const double* p = probs.data() + r * width;
                         if (p[saved[r]] < kProbabilityFloor) continue;
                         for (std::size_t c = 0; c < width; ++c) {
                           const double y = static_cast<std::int32_t>(c) == saved[r] ? 1.0 : 0.0;
                           pl.grad[r * width + c] += g * (p[c] - y);
                         }
                       }
                     });
}

Tensor nll_loss(const Tensor& probs, std::span<const std::int32_t> labels) {
  check_labels("nll_loss", probs, labels);
  const std::size_t rows = probs.dim(0), width = probs.dim(1);
  auto p = probs.values();
  double loss = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    loss -= std::log(std::max(p[r * width + labels[r]], kProbabilityFloor));
  }
  loss /= static_cast<double>(rows);
  std::vector<std::int32_t> saved(labels.begin(), labels.end());
  return make_result({1}, {loss}, {probs}, [rows, width, saved = std::move(saved)](Node& self) {
    auto& pp = parent(self, 0);
    if (!pp.requires_grad) return;
    pp.ensure_grad();
    const double g = self.grad[0] / static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t i = r * width + static_cast<std::size_t>(saved[r]);
      if (pp.value[i] < kProbabilityFloor) continue;
      pp.grad[i] -= g / pp.value[i];
    }
  });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.values()) total += v;
  return make_result({1}, {total}, {a}, [](Node& self) {
    auto& pa = parent(self, 0);
    if (!pa.requires_grad) return;
    pa.ensure_grad();
    for (auto& g : pa.grad) g += self.grad[0];
  });
}

Tensor mean(const Tensor& a) {
  if (a.numel() == 0) throw ShapeMismatch("mean: empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(a.numel()));
}

}  // namespace deepcva::tensor
