#include "roughstruct/modelled_distributions.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "roughstruct/errors.hpp"
#include "roughstruct/parallel.hpp"

namespace roughstruct {

ControlledPath::ControlledPath(SampledPath y, SampledPath y_prime, SampledPath reference)
    : y_(std::move(y)), yp_(std::move(y_prime)), ref_(std::move(reference)) {
  if (!(y_.grid() == yp_.grid()) || !(y_.grid() == ref_.grid()))
    throw InvalidArgument("controlled path grids differ");
  if (yp_.dim() != y_.dim() * ref_.dim())
    throw InvalidArgument("Gubinelli derivative must have d * n components");
}

double ControlledPath::remainder(std::size_t s, std::size_t t, std::size_t i) const {
  const std::size_t n = noise_dim();
  double r = y_.increment(s, t, i);
  for (std::size_t j = 0; j < n; ++j) r -= derivative(s, i, j) * ref_.increment(s, t, j);
  return r;
}

ControlledNorm controlled_norm(const ControlledPath& cp, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  const auto& g = cp.grid();
  const auto sampling = pair_sampling_for(g.level(), 8);
  const double h = g.step();
  ControlledNorm out;
  out.derivative = holder_seminorm(cp.y_prime(), alpha, sampling);
  out.remainder = max_over_pairs(g.intervals(), sampling, [&](std::size_t s, std::size_t t) {
    double r = 0.0;
    for (std::size_t i = 0; i < cp.dim(); ++i) r += std::abs(cp.remainder(s, t, i));
    return r / std::pow(static_cast<double>(t - s) * h, 2.0 * alpha);
  });
  return out;
}

// ---------------------------------------------------------------------------

ModelledDistribution::ModelledDistribution(TimeGrid grid, double gamma, std::size_t components,
                                           std::vector<ModelSpaceVector> values)
    : grid_(grid), gamma_(gamma), components_(components), values_(std::move(values)) {
  if (components_ == 0) throw InvalidArgument("modelled distribution needs at least one component");
  if (values_.size() != grid_.size() * components_)
    throw InvalidArgument("modelled distribution values do not match grid and components");
}

ModelledDistribution ModelledDistribution::operator-(const ModelledDistribution& o) const {
  if (!(grid_ == o.grid_) || components_ != o.components_ || gamma_ != o.gamma_)
    throw InvalidArgument("modelled distributions differ in grid, gamma or components");
  std::vector<ModelSpaceVector> v(values_.size());
  for (std::size_t q = 0; q < v.size(); ++q) v[q] = values_[q] - o.values_[q];
  return ModelledDistribution(grid_, gamma_, components_, std::move(v));
}

ModelledDistribution to_modelled(const ControlledPath& cp, double alpha) {
  const std::size_t d = cp.dim(), n = cp.noise_dim();
  std::vector<ModelSpaceVector> v(cp.grid().size() * d);
  for (std::size_t k = 0; k < cp.grid().size(); ++k)
    for (std::size_t i = 0; i < d; ++i) {
      auto& x = v[k * d + i];
      x.add(Symbol::one(), cp.y()(k, i));
      for (std::size_t j = 0; j < n; ++j) x.add(Symbol::W(j), cp.derivative(k, i, j));
    }
  return ModelledDistribution(cp.grid(), 2.0 * alpha, d, std::move(v));
}

ControlledPath from_modelled(const ModelledDistribution& f, const SampledPath& reference) {
  const std::size_t d = f.components(), n = reference.dim();
  const auto& g = f.grid();
  std::vector<double> y(g.size() * d, 0.0), yp(g.size() * d * n, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (const auto& [s, c] : f.at(k, i).entries()) {
        if (s.tag == SymbolTag::one)
          y[k * d + i] = c;
        else if (s.tag == SymbolTag::W && s.i < n)
          yp[(k * d + i) * n + s.i] = c;
        else
          throw InvalidArgument("modelled distribution has symbol " + s.name() +
                                " outside the controlled-path image");
      }
  return ControlledPath(SampledPath(g, d, std::move(y)), SampledPath(g, d * n, std::move(yp)),
                        reference);
}

MdSeminorm md_seminorm(const ModelledDistribution& f, const Model& model) {
  if (!(f.grid() == model.grid())) throw InvalidArgument("modelled distribution and model grids differ");
  const double alpha = model.structure().alpha();
  const double gamma = f.gamma();
  std::vector<double> levels;
  for (double b : model.structure().index_set())
    if (b < gamma) levels.push_back(b);
  const auto& g = f.grid();
  const std::size_t N = g.intervals();
  const auto sampling = pair_sampling_for(g.level(), 8);
  const double h = g.step();
  const std::size_t m = f.components();

  std::vector<double> best(levels.size(), 0.0);
  std::mutex mu;
  const auto visit = [&](std::size_t s, std::size_t t, std::vector<double>& local) {
    const auto G = model.gamma(g.node(static_cast<long>(t)), g.node(static_cast<long>(s)));
    std::vector<double> norms(levels.size(), 0.0);
    for (std::size_t c = 0; c < m; ++c) {
      const auto diff = f.at(t, c) - gamma_apply(G, f.at(s, c));
      for (std::size_t q = 0; q < levels.size(); ++q) norms[q] += diff.component_norm(levels[q], alpha);
    }
    const double dist = static_cast<double>(t - s) * h;
    for (std::size_t q = 0; q < levels.size(); ++q)
      local[q] = std::max(local[q], norms[q] / std::pow(dist, gamma - levels[q]));
  };
  parallel_for(N, [&](std::size_t s) {
    std::vector<double> local(levels.size(), 0.0);
    if (sampling == PairSampling::all) {
      for (std::size_t t = s + 1; t <= N; ++t) visit(s, t, local);
    } else {
      for (std::size_t w = 1; s + w <= N; w <<= 1) visit(s, s + w, local);
    }
    std::lock_guard<std::mutex> lock(mu);
    for (std::size_t q = 0; q < levels.size(); ++q) best[q] = std::max(best[q], local[q]);
  }, 4);
  MdSeminorm out;
  for (std::size_t q = 0; q < levels.size(); ++q) {
    out.levels.emplace_back(levels[q], best[q]);
    out.value = std::max(out.value, best[q]);
  }
  return out;
}

double md_norm(const ModelledDistribution& f, const Model& model) {
  const double alpha = model.structure().alpha();
  double sup0 = 0.0;
  for (double b : model.structure().index_set()) {
    if (b >= f.gamma()) continue;
    double s = 0.0;
    for (std::size_t c = 0; c < f.components(); ++c) s += f.at(0, c).component_norm(b, alpha);
    sup0 = std::max(sup0, s);
  }
  return sup0 + md_seminorm(f, model).value;
}

ModelledDistribution multiply_by_Wdot(const ModelledDistribution& f, std::size_t noise_dim,
                                      double alpha) {
  const std::size_t n = noise_dim;
  if (n == 0 || f.components() % n != 0)
    throw InvalidArgument("components must be a multiple of the noise dimension");
  const std::size_t d = f.components() / n;
  const auto& g = f.grid();
  std::vector<ModelSpaceVector> v(g.size() * d);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (std::size_t i = 0; i < d; ++i) {
      auto& out = v[k * d + i];
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& [s, c] : f.at(k, i * n + j).entries()) {
          if (s.tag == SymbolTag::one)
            out.add(Symbol::Wdot(j), c);
          else if (s.tag == SymbolTag::W)
            out.add(Symbol::WWdot(s.i, j), c);
          else
            throw InvalidArgument("product with Wdot is only defined on 1 and W, got " + s.name());
        }
    }
  return ModelledDistribution(g, f.gamma() + alpha - 1.0, d, std::move(v));
}

ModelledDistribution compose(const FunctionDescriptor& F, const ModelledDistribution& f) {
  if (!F.value || !F.jacobian || !F.hessian)
    throw InvalidArgument("function " + F.name + " must provide derivatives up to order 2");
  const std::size_t d = F.dim, m = F.outputs();
  if (f.components() != d) throw InvalidArgument("function dimension differs from the modelled distribution");
  const auto& g = f.grid();
  std::vector<ModelSpaceVector> v(g.size() * m);
  parallel_for(g.size(), [&](std::size_t k) {
    std::vector<double> y(d, 0.0);
    std::vector<std::vector<double>> yp(d);
    for (std::size_t i = 0; i < d; ++i)
      for (const auto& [s, c] : f.at(k, i).entries()) {
        if (s.tag == SymbolTag::one) {
          y[i] = c;
        } else if (s.tag == SymbolTag::W) {
          if (yp[i].size() <= s.i) yp[i].resize(s.i + 1, 0.0);
          yp[i][s.i] = c;
        } else {
          throw InvalidArgument("composition is only defined on 1 and W, got " + s.name());
        }
      }
    if (!F.domain.empty() && !F.domain.contains(y.data()))
      throw NumericalFailure("path left the declared domain of " + F.name);
    const auto val = F.eval(y.data());
    const auto jac = F.eval_jacobian(y.data());
    std::size_t noise = 0;
    for (const auto& row : yp) noise = std::max(noise, row.size());
    for (std::size_t r = 0; r < m; ++r) {
      auto& out = v[k * m + r];
      out.add(Symbol::one(), val[r]);
      for (std::size_t q = 0; q < noise; ++q) {
        double c = 0.0;
        for (std::size_t l = 0; l < d; ++l)
          if (q < yp[l].size()) c += jac[r * d + l] * yp[l][q];
        out.add(Symbol::W(q), c);
      }
    }
  });
  return ModelledDistribution(g, f.gamma(), m, std::move(v));
}

}  // namespace roughstruct
