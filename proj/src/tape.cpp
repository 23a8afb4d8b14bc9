#include "gtrs/tape.hpp"

#include <cmath>

#include "gtrs/ops.hpp"

namespace gtrs {

namespace {

void accumulate(Tensor& g, const Tensor& delta) {
    for (std::int64_t i = 0; i < g.size(); ++i) g[i] += delta[i];
}

}  // namespace

Var Tape::push(Tensor value, bool needs, std::function<void()> back) {
    const int id = node_count();
    values_.push_back(std::move(value));
    grads_.emplace_back();
    needs_.push_back(needs);
    backs_.push_back(std::move(back));
    return Var{id};
}

bool Tape::any_needs(std::initializer_list<Var> vs) const {
    for (Var v : vs) {
        if (needs_[static_cast<std::size_t>(v.id)]) return true;
    }
    return false;
}

Tensor& Tape::grad(Var v) {
    Tensor& g = grads_[static_cast<std::size_t>(v.id)];
    if (g.size() == 0) g = Tensor::zeros(values_[static_cast<std::size_t>(v.id)].shape());
    return g;
}

Var Tape::constant(Tensor value) { return push(std::move(value), false, nullptr); }

Var Tape::leaf(Tensor value, bool needs_grad) {
    return push(std::move(value), needs_grad && grad_enabled_, nullptr);
}

Var Tape::param(ParamStore& store, const std::string& name) {
    if (bound_store_ == nullptr) bound_store_ = &store;
    if (bound_store_ != &store) throw ConfigError("tape bound to a different ParamStore");
    auto it = param_nodes_.find(name);
    if (it != param_nodes_.end()) return it->second;
    const int idx = store.index(name);
    const ParamEntry& e = store.entry(idx);
    Var v = leaf(e.value, e.trainable);
    param_nodes_.emplace(name, v);
    param_bindings_.emplace_back(v.id, idx);
    return v;
}

Var Tape::matmul(Var a, Var b) {
    Tensor c = ops::matmul(value(a), value(b));
    if (!grad_enabled_ || !any_needs({a, b})) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, a, b, out] {
        const Tensor& dc = grad(out);
        if (needs_grad(a)) accumulate(grad(a), ops::matmul_nt(dc, value(b)));
        if (needs_grad(b)) accumulate(grad(b), ops::matmul_tn(value(a), dc));
    });
}

Var Tape::matmul_nt(Var a, Var b) {
    Tensor c = ops::matmul_nt(value(a), value(b));
    if (!grad_enabled_ || !any_needs({a, b})) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, a, b, out] {
        const Tensor& dc = grad(out);
        if (needs_grad(a)) accumulate(grad(a), ops::matmul(dc, value(b)));
        if (needs_grad(b)) accumulate(grad(b), ops::matmul_tn(dc, value(a)));
    });
}

Var Tape::add(Var a, Var b) {
    Tensor c = ops::add(value(a), value(b));
    if (!grad_enabled_ || !any_needs({a, b})) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, a, b, out] {
        const Tensor& dc = grad(out);
        if (needs_grad(a)) accumulate(grad(a), dc);
        if (needs_grad(b)) accumulate(grad(b), dc);
    });
}

Var Tape::sub(Var a, Var b) {
    Tensor c = ops::sub(value(a), value(b));
    if (!grad_enabled_ || !any_needs({a, b})) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, a, b, out] {
        const Tensor& dc = grad(out);
        if (needs_grad(a)) accumulate(grad(a), dc);
        if (needs_grad(b)) {
            Tensor& gb = grad(b);
            for (std::int64_t i = 0; i < gb.size(); ++i) gb[i] -= dc[i];
        }
    });
}

Var Tape::mul(Var a, Var b) {
    Tensor c = ops::mul(value(a), value(b));
    if (!grad_enabled_ || !any_needs({a, b})) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, a, b, out] {
        const Tensor& dc = grad(out);
        if (needs_grad(a)) accumulate(grad(a), ops::mul(dc, value(b)));
        if (needs_grad(b)) accumulate(grad(b), ops::mul(dc, value(a)));
    });
}

Var Tape::scale(Var a, double s) {
    Tensor c = ops::scale(value(a), s);
    if (!grad_enabled_ || !needs_grad(a)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, a, s, out] { accumulate(grad(a), ops::scale(grad(out), s)); });
}

Var Tape::add_rowvec(Var x, Var b) {
    const Tensor& bv = value(b);
    if (bv.rank() != 2 || bv.rows() != 1 || bv.cols() != value(x).cols()) {
        throw ShapeError("add_rowvec: " + value(x).shape_str() + " + " + bv.shape_str());
    }
    Tensor c = value(x);
    for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j) c.at(i, j) += bv.at(0, j);
    if (!grad_enabled_ || !any_needs({x, b})) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, b, out] {
        const Tensor& dc = grad(out);
        if (needs_grad(x)) accumulate(grad(x), dc);
        if (needs_grad(b)) {
            Tensor& gb = grad(b);
            for (int i = 0; i < dc.rows(); ++i)
                for (int j = 0; j < dc.cols(); ++j) gb.at(0, j) += dc.at(i, j);
        }
    });
}

Var Tape::add_colvec(Var x, Var b) {
    const Tensor& bv = value(b);
    if (bv.rank() != 2 || bv.cols() != 1 || bv.rows() != value(x).rows()) {
        throw ShapeError("add_colvec: " + value(x).shape_str() + " + " + bv.shape_str());
    }
    Tensor c = value(x);
    for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j) c.at(i, j) += bv.at(i, 0);
    if (!grad_enabled_ || !any_needs({x, b})) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, b, out] {
        const Tensor& dc = grad(out);
        if (needs_grad(x)) accumulate(grad(x), dc);
        if (needs_grad(b)) {
            Tensor& gb = grad(b);
            for (int i = 0; i < dc.rows(); ++i)
                for (int j = 0; j < dc.cols(); ++j) gb.at(i, 0) += dc.at(i, j);
        }
    });
}

Var Tape::mul_rowvec(Var x, Var g) {
    const Tensor& gv = value(g);
    if (gv.rank() != 2 || gv.rows() != 1 || gv.cols() != value(x).cols()) {
        throw ShapeError("mul_rowvec: " + value(x).shape_str() + " * " + gv.shape_str());
    }
    Tensor c = value(x);
    for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j) c.at(i, j) *= gv.at(0, j);
    if (!grad_enabled_ || !any_needs({x, g})) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, g, out] {
        const Tensor& dc = grad(out);
        const Tensor& xv = value(x);
        const Tensor& gv2 = value(g);
        if (needs_grad(x)) {
            Tensor& gx = grad(x);
            for (int i = 0; i < dc.rows(); ++i)
                for (int j = 0; j < dc.cols(); ++j) gx.at(i, j) += dc.at(i, j) * gv2.at(0, j);
        }
        if (needs_grad(g)) {
            Tensor& gg = grad(g);
            for (int i = 0; i < dc.rows(); ++i)
                for (int j = 0; j < dc.cols(); ++j) gg.at(0, j) += dc.at(i, j) * xv.at(i, j);
        }
    });
}

Var Tape::gelu(Var x) {
    Tensor c = ops::gelu(value(x));
    if (!grad_enabled_ || !needs_grad(x)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, out] {
        const Tensor& dc = grad(out);
        const Tensor& xv = value(x);
        Tensor& gx = grad(x);
        for (std::int64_t i = 0; i < dc.size(); ++i) gx[i] += dc[i] * ops::gelu_grad_scalar(xv[i]);
    });
}

Var Tape::sigmoid(Var x) {
    Tensor c = ops::sigmoid(value(x));
    if (!grad_enabled_ || !needs_grad(x)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, out] {
        const Tensor& dc = grad(out);
        const Tensor& y = value(out);
        Tensor& gx = grad(x);
        for (std::int64_t i = 0; i < dc.size(); ++i) gx[i] += dc[i] * y[i] * (1.0 - y[i]);
    });
}

Var Tape::softmax_rows(Var x) {
    Tensor c = ops::softmax_rows(value(x));
    if (!grad_enabled_ || !needs_grad(x)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, out] {
        const Tensor& dc = grad(out);
        const Tensor& y = value(out);
        Tensor& gx = grad(x);
        for (int i = 0; i < y.rows(); ++i) {
            double dot = 0.0;
            for (int j = 0; j < y.cols(); ++j) dot += dc.at(i, j) * y.at(i, j);
            for (int j = 0; j < y.cols(); ++j) gx.at(i, j) += y.at(i, j) * (dc.at(i, j) - dot);
        }
    });
}

Var Tape::layer_norm_rows(Var x) {
    Tensor c = ops::layer_norm_rows(value(x), ops::kLayerNormEps);
    if (!grad_enabled_ || !needs_grad(x)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, out] {
        const Tensor& dc = grad(out);
        const Tensor& xv = value(x);
        const Tensor& y = value(out);
        Tensor& gx = grad(x);
        const int n = xv.cols();
        for (int i = 0; i < xv.rows(); ++i) {
            double mean = 0.0;
            for (int j = 0; j < n; ++j) mean += xv.at(i, j);
            mean /= n;
            double var = 0.0;
            for (int j = 0; j < n; ++j) {
                const double d = xv.at(i, j) - mean;
                var += d * d;
            }
            var /= n;
            const double inv = 1.0 / std::sqrt(var + ops::kLayerNormEps);
            double m1 = 0.0, m2 = 0.0;
            for (int j = 0; j < n; ++j) {
                m1 += dc.at(i, j);
                m2 += dc.at(i, j) * y.at(i, j);
            }
            m1 /= n;
            m2 /= n;
            for (int j = 0; j < n; ++j) gx.at(i, j) += inv * (dc.at(i, j) - m1 - y.at(i, j) * m2);
        }
    });
}

Var Tape::mean_rows(Var x) {
    Tensor c = ops::mean_rows(value(x));
    if (!grad_enabled_ || !needs_grad(x)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    const int m = value(x).rows();
    return push(std::move(c), true, [this, x, out, m] {
        const Tensor& dc = grad(out);
        Tensor& gx = grad(x);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < dc.cols(); ++j) gx.at(i, j) += dc.at(0, j) / m;
    });
}

Var Tape::sum_all(Var x) {
    Tensor c = Tensor::scalar(ops::sum(value(x)));
    if (!grad_enabled_ || !needs_grad(x)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, out] {
        const double d = grad(out)[0];
        Tensor& gx = grad(x);
        for (std::int64_t i = 0; i < gx.size(); ++i) gx[i] += d;
    });
}

Var Tape::concat_rows(const std::vector<Var>& blocks) {
    std::vector<Tensor> vals;
    vals.reserve(blocks.size());
    bool needs = false;
    for (Var b : blocks) {
        vals.push_back(value(b));
        needs = needs || needs_grad(b);
    }
    Tensor c = ops::concat_rows(vals);
    if (!grad_enabled_ || !needs) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    std::vector<Var> parents = blocks;
    return push(std::move(c), true, [this, parents, out] {
        const Tensor& dc = grad(out);
        int r = 0;
        for (Var p : parents) {
            const int pr = value(p).rows();
            if (needs_grad(p)) {
                Tensor& gp = grad(p);
                for (int i = 0; i < pr; ++i)
                    for (int j = 0; j < dc.cols(); ++j) gp.at(i, j) += dc.at(r + i, j);
            }
            r += pr;
        }
    });
}

Var Tape::slice_rows(Var x, int r0, int r1) {
    Tensor c = ops::slice_rows(value(x), r0, r1);
    if (!grad_enabled_ || !needs_grad(x)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, r0, r1, out] {
        const Tensor& dc = grad(out);
        Tensor& gx = grad(x);
        for (int i = r0; i < r1; ++i)
            for (int j = 0; j < dc.cols(); ++j) gx.at(i, j) += dc.at(i - r0, j);
    });
}

Var Tape::concat_cols(const std::vector<Var>& blocks) {
    std::vector<Tensor> vals;
    vals.reserve(blocks.size());
    bool needs = false;
    for (Var b : blocks) {
        vals.push_back(value(b));
        needs = needs || needs_grad(b);
    }
    Tensor c = ops::concat_cols(vals);
    if (!grad_enabled_ || !needs) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    std::vector<Var> parents = blocks;
    return push(std::move(c), true, [this, parents, out] {
        const Tensor& dc = grad(out);
        int off = 0;
        for (Var p : parents) {
            const int pc = value(p).cols();
            if (needs_grad(p)) {
                Tensor& gp = grad(p);
                for (int i = 0; i < dc.rows(); ++i)
                    for (int j = 0; j < pc; ++j) gp.at(i, j) += dc.at(i, off + j);
            }
            off += pc;
        }
    });
}

Var Tape::slice_cols(Var x, int c0, int c1) {
    Tensor c = ops::slice_cols(value(x), c0, c1);
    if (!grad_enabled_ || !needs_grad(x)) return push(std::move(c), false, nullptr);
    Var out{node_count()};
    return push(std::move(c), true, [this, x, c0, c1, out] {
        const Tensor& dc = grad(out);
        Tensor& gx = grad(x);
        for (int i = 0; i < dc.rows(); ++i)
            for (int j = c0; j < c1; ++j) gx.at(i, j) += dc.at(i, j - c0);
    });
}

Var Tape::custom(std::vector<Var> parents, Tensor value, std::function<void(Tape&, const Tensor&)> back) {
    bool needs = false;
    for (Var p : parents) needs = needs || needs_grad(p);
    if (!grad_enabled_ || !needs) return push(std::move(value), false, nullptr);
    Var out{node_count()};
    auto fn = std::move(back);
    return push(std::move(value), true, [this, out, fn] { fn(*this, grad(out)); });
}

void Tape::backward(Var loss) {
    if (!grad_enabled_) throw ConfigError("backward() on a tape built with grad_enabled=false");
    if (value(loss).size() != 1) {
        throw ShapeError("backward() seed must be a single element, got " + value(loss).shape_str());
    }
    grad(loss)[0] = 1.0;
    for (int i = loss.id; i >= 0; --i) {
        const auto idx = static_cast<std::size_t>(i);
        if (!backs_[idx]) continue;
        if (grads_[idx].size() == 0) continue;  // nothing flowed into this node
        backs_[idx]();
    }
    if (bound_store_ == nullptr) return;
    for (const auto& [node, idx] : param_bindings_) {
        ParamEntry& e = bound_store_->entry(idx);
        if (!e.trainable) continue;
        const Tensor& g = grads_[static_cast<std::size_t>(node)];
        if (g.size() == 0) continue;
        accumulate(e.grad, g);
    }
}

}  // namespace gtrs
