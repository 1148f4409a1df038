#pragma once

#include <memory>
#include <vector>

#include "pmt/map_kernel.hpp"
#include "pmt/potential.hpp"

namespace pmt {

// A potential flattened to  c0 + sum_i a_i omega(g_i) + b (-log Df) + sum_k t_k T_k.
struct LinearForm {
  struct OmegaTerm {
    double coef;
    double gamma;
  };
  struct TableTerm {
    double coef;
    std::shared_ptr<const TableData> table;
  };
  double constant = 0.0;
  std::vector<OmegaTerm> omegas;
  double neglogdf = 0.0;
  std::vector<TableTerm> tables;
};

LinearForm flatten(const Potential& phi);

// Values of psi = phi - phi(0) split by monotonicity: `dec` collects the
// nonincreasing terms, `inc` the nondecreasing ones, `tab` the tabulated ones.
struct Parts {
  double dec = 0.0;
  double inc = 0.0;
  double tab = 0.0;

  Parts& operator+=(const Parts& o) {
    dec += o.dec;
    inc += o.inc;
    tab += o.tab;
    return *this;
  }
  Parts& operator-=(const Parts& o) {
    dec -= o.dec;
    inc -= o.inc;
    tab -= o.tab;
    return *this;
  }
  double total() const { return dec + inc + tab; }
};

inline Parts operator+(Parts a, const Parts& b) { return a += b; }
inline Parts operator-(Parts a, const Parts& b) { return a -= b; }

// Bounds for psi near 0:  sum lower_i x^p_i <= psi(x) <= sum upper_i x^p_i.
struct EnvelopeTerm {
  double power;
  double upper;
  double lower;
};

// Sums of parts at the two ends of an interval whose forward images up to
// the relevant time are all traversed increasingly.
struct EndpointSums {
  Parts left;
  Parts right;
  double slack = 0.0;  // sum of |image|^g over the traversed images
};

class PartEvaluator {
 public:
  PartEvaluator(const LinearForm& form, const MapParams& params);

  Parts operator()(double x) const;
  double psi(double x) const { return (*this)(x).total(); }

  double phi0() const { return phi0_; }
  bool has_tables() const { return table_weight_ > 0.0; }
  double slack_gamma() const { return table_gamma_; }
  double slack_weight() const { return table_weight_; }
  double slack_term(double length) const;

  // bracket of sup / inf of the Birkhoff sum over the interval
  double sup_bound(const EndpointSums& e) const;
  double inf_bound(const EndpointSums& e) const;

  // sup / inf of psi itself over [a,b]
  double sup_on(double a, double b) const;
  double inf_on(double a, double b) const;

  const std::vector<EnvelopeTerm>& envelope() const { return envelope_; }
  const MapParams& params() const { return params_; }

 private:
  MapParams params_;
  std::vector<LinearForm::OmegaTerm> omegas_;
  double neglogdf_ = 0.0;
  std::vector<LinearForm::TableTerm> tables_;
  std::vector<double> table_at_zero_;
  double phi0_ = 0.0;
  double table_gamma_ = 1.0;
  double table_weight_ = 0.0;
  std::vector<EnvelopeTerm> envelope_;
};

}  // namespace pmt
