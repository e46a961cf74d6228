// Copyright 2026 The qk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qk/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qk/error.hpp"

namespace qk {

OptimizerResult nelder_mead(const Objective& f, std::vector<double> x0,
                            const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  OptimizerResult best;
  auto eval = [&](const std::vector<double>& x) {
    double v = f(x);
    ++best.evaluations;
    return v;
  };
  if (n == 0 || opts.max_evaluations <= 0) {
    best.x = x0;
    if (opts.max_evaluations > 0) best.fx = eval(x0);
    return best;
  }

  std::vector<std::vector<double>> simplex{x0};
  for (std::size_t i = 0; i < n; ++i) {
    auto v = x0;
    v[i] += opts.initial_step;
    simplex.push_back(std::move(v));
  }
  std::vector<double> values;
  for (const auto& v : simplex) {
    if (best.evaluations >= opts.max_evaluations) break;
    values.push_back(eval(v));
  }
  simplex.resize(values.size());

  auto budget = [&] { return best.evaluations < opts.max_evaluations; };
  auto affine = [&](const std::vector<double>& c, const std::vector<double>& p, double t) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = c[i] + t * (p[i] - c[i]);
    return r;
  };

  std::vector<std::size_t> order(simplex.size());
  while (simplex.size() == n + 1 && budget()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<std::vector<double>> s;
      std::vector<double> fv;
      for (auto i : order) {
        s.push_back(simplex[i]);
        fv.push_back(values[i]);
      }
      simplex.swap(s);
      values.swap(fv);
    }

    double diameter = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[0][i]));
      }
    }
    if (values[n] - values[0] <= opts.ftol && diameter <= opts.xtol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
    }

    auto reflected = affine(centroid, simplex[n], -1.0);
    double fr = eval(reflected);
    if (fr < values[0]) {
      if (!budget()) {
        simplex[n] = reflected;
        values[n] = fr;
        break;
      }
      auto expanded = affine(centroid, simplex[n], -2.0);
      double fe = eval(expanded);
      if (fe < fr) {
        simplex[n] = expanded;
        values[n] = fe;
      } else {
        simplex[n] = reflected;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = fr;
      continue;
    }
    if (!budget()) break;
    bool outside = fr < values[n];
    auto contracted = affine(centroid, outside ? reflected : simplex[n], 0.5);
    double fc = eval(contracted);
    if (fc < std::min(fr, values[n])) {
      simplex[n] = contracted;
      values[n] = fc;
      continue;
    }
    if (outside) {
      simplex[n] = reflected;
      values[n] = fr;
    }
    // Shrink toward the best vertex.
    for (std::size_t k = 1; k <= n && budget(); ++k) {
      simplex[k] = affine(simplex[0], simplex[k], 0.5);
      values[k] = eval(simplex[k]);
    }
  }

  auto it = std::min_element(values.begin(), values.end());
  best.x = simplex[static_cast<std::size_t>(it - values.begin())];
  best.fx = *it;
  return best;
}

ObjectiveFunction::ObjectiveFunction(const KernelRegistry& registry,
                                     std::shared_ptr<const CompiledKernel> kernel,
                                     PauliOperator observable, int qreg_size, ArgPack fixed,
                                     ExecOptions opts)
    : registry_(registry),
      kernel_(std::move(kernel)),
      observable_(std::move(observable)),
      qreg_size_(qreg_size),
      fixed_(std::move(fixed)),
      opts_(std::move(opts)) {
  for (std::size_t i = 1; i < kernel_->params.size(); ++i) {
    const auto& p = kernel_->params[i];
    if (fixed_.find(p.name)) continue;
    if (p.type.kind == TypeKind::Float) {
      if (dimension_ >= 0) ++dimension_;
    } else if (p.type.kind == TypeKind::ListFloat) {
      dimension_ = -1;
    } else {
      throw Error(ErrorCode::TypeMismatch, "parameter '" + p.name + "' of kernel '" +
                                               kernel_->name +
                                               "' is not variational and has no fixed value");
    }
  }
}

ArgPack ObjectiveFunction::bind(const std::vector<double>& x) const {
  ArgPack pack;
  std::size_t next = 0;
  for (std::size_t i = 0; i < kernel_->params.size(); ++i) {
    const auto& p = kernel_->params[i];
    if (i == 0) {
      pack.set(p.name, QRegArg{qreg_size_});
    } else if (const ArgValue* v = fixed_.find(p.name)) {
      pack.set(p.name, *v);
    } else if (p.type.kind == TypeKind::Float) {
      if (next >= x.size()) {
        throw Error(ErrorCode::ArityError, "too few variational parameters for '" + kernel_->name + "'");
      }
      pack.set(p.name, x[next++]);
    } else {
      ArgList rest;
      for (; next < x.size(); ++next) rest.emplace_back(x[next]);
      pack.set(p.name, std::move(rest));
    }
  }
  if (next != x.size()) {
    throw Error(ErrorCode::ArityError, "too many variational parameters for '" + kernel_->name + "'");
  }
  return pack;
}

double ObjectiveFunction::operator()(const std::vector<double>& x) {
  ++evaluations_;
  return observe(registry_, *kernel_, observable_, bind(x), opts_);
}

}  // namespace qk
