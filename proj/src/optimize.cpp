#include "softpack/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <memory>

#include "softpack/errors.hpp"

namespace softpack::numeric {

namespace {

struct Call {
  const std::function<double(std::span<const double>)>* f;
  int evaluations = 0;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* call = static_cast<Call*>(params);
  ++call->evaluations;
  const double value = (*call->f)(std::span<const double>(v->data, v->size));
  // The simplex method copes with +inf but not with NaN.
  return std::isnan(value) ? HUGE_VAL : value;
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          std::vector<double> step, double size_tol, int max_iter) {
  const std::size_t n = x0.size();
  if (n == 0 || step.size() != n) throw InputError("nelder_mead: start and step sizes differ");
  gsl_set_error_handler_off();
  Call call{&f};
  gsl_multimin_function fn{&trampoline, n, &call};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n), &gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> ss(gsl_vector_alloc(n), &gsl_vector_free);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, x0[i]);
    gsl_vector_set(ss.get(), i, step[i]);
  }
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());
  SimplexResult out;
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), size_tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  out.x.assign(s->x->data, s->x->data + n);
  out.value = s->fval;
  out.evaluations = call.evaluations;
  return out;
}

}  // namespace softpack::numeric
