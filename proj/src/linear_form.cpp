#include "pmt/linear_form.hpp"

#include <algorithm>
#include <cmath>

namespace pmt {

namespace {

void flatten_into(const Potential& p, double coef, LinearForm& out) {
  using K = Potential::Kind;
  switch (p.kind()) {
    case K::Omega: {
      for (auto& t : out.omegas)
        if (t.gamma == p.value()) {
          t.coef += coef;
          return;
        }
      out.omegas.push_back({coef, p.value()});
      return;
    }
    case K::NegLogDf: out.neglogdf += coef; return;
    case K::Const: out.constant += coef * p.value(); return;
    case K::Table: out.tables.push_back({coef, p.table_ptr()}); return;
    case K::Scale: flatten_into(p.children()[0], coef * p.value(), out); return;
    case K::Sum:
      for (const auto& c : p.children()) flatten_into(c, coef, out);
      return;
  }
}

void add_envelope(std::vector<EnvelopeTerm>& env, double power, double upper, double lower) {
  if (upper == 0.0 && lower == 0.0) return;
  for (auto& t : env)
    if (t.power == power) {
      t.upper += upper;
      t.lower += lower;
      return;
    }
  env.push_back({power, upper, lower});
}

}  // namespace

LinearForm flatten(const Potential& phi) {
  LinearForm f;
  flatten_into(phi, 1.0, f);
  std::erase_if(f.omegas, [](const LinearForm::OmegaTerm& t) { return t.coef == 0.0; });
  std::erase_if(f.tables, [](const LinearForm::TableTerm& t) { return t.coef == 0.0; });
  return f;
}

PartEvaluator::PartEvaluator(const LinearForm& form, const MapParams& params)
    : params_(params), omegas_(form.omegas), neglogdf_(form.neglogdf), tables_(form.tables) {
  phi0_ = form.constant;
  for (const auto& t : tables_) {
    const double v0 = t.table->eval(0.0);
    table_at_zero_.push_back(v0);
    phi0_ += t.coef * v0;
    table_weight_ += std::abs(t.coef) * t.table->seminorm;
    table_gamma_ = std::min(table_gamma_, t.table->gamma);
  }

  const double a = params.alpha();
  for (const auto& t : omegas_) add_envelope(envelope_, t.gamma, -t.coef, -t.coef);
  if (neglogdf_ != 0.0) {
    // t - t^2/2 <= log(1+t) <= t with t = (1+a) x^a
    const double c = 1.0 + a;
    add_envelope(envelope_, a, -neglogdf_ * c, -neglogdf_ * c);
    add_envelope(envelope_, 2.0 * a, std::max(neglogdf_, 0.0) * c * c / 2.0,
                 std::min(neglogdf_, 0.0) * c * c / 2.0);
  }
  for (const auto& t : tables_) {
    const double w = std::abs(t.coef) * t.table->seminorm;
    add_envelope(envelope_, t.table->gamma, w, -w);
  }
  std::erase_if(envelope_, [](const EnvelopeTerm& t) { return t.upper == 0.0 && t.lower == 0.0; });
  std::sort(envelope_.begin(), envelope_.end(),
            [](const EnvelopeTerm& l, const EnvelopeTerm& r) { return l.power < r.power; });
}

Parts PartEvaluator::operator()(double x) const {
  Parts p;
  const double a = params_.alpha();
  double xa = -1.0;
  for (const auto& t : omegas_) {
    double v;
    if (t.gamma == a) {
      if (xa < 0.0) xa = std::pow(x, a);
      v = xa;
    } else {
      v = std::pow(x, t.gamma);
    }
    const double term = -t.coef * v;
    if (t.coef > 0.0)
      p.dec += term;
    else
      p.inc += term;
  }
  if (neglogdf_ != 0.0) {
    if (xa < 0.0) xa = std::pow(x, a);
    const double term = -neglogdf_ * std::log1p((1.0 + a) * xa);
    if (neglogdf_ > 0.0)
      p.dec += term;
    else
      p.inc += term;
  }
  for (std::size_t k = 0; k < tables_.size(); ++k)
    p.tab += tables_[k].coef * (tables_[k].table->eval(x) - table_at_zero_[k]);
  return p;
}

double PartEvaluator::slack_term(double length) const {
  if (table_weight_ == 0.0) return 0.0;
  return table_weight_ * std::pow(std::max(length, 0.0), table_gamma_);
}

double PartEvaluator::sup_bound(const EndpointSums& e) const {
  return e.left.dec + e.right.inc + std::min(e.left.tab, e.right.tab) + e.slack;
}

double PartEvaluator::inf_bound(const EndpointSums& e) const {
  return e.right.dec + e.left.inc + std::max(e.left.tab, e.right.tab) - e.slack;
}

double PartEvaluator::sup_on(double a, double b) const {
  return sup_bound(EndpointSums{(*this)(a), (*this)(b), slack_term(b - a)});
}

double PartEvaluator::inf_on(double a, double b) const {
  return inf_bound(EndpointSums{(*this)(a), (*this)(b), slack_term(b - a)});
}

}  // namespace pmt
