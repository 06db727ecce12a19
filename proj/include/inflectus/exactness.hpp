#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "inflectus/error.hpp"
#include "inflectus/rational.hpp"

namespace inflectus {

inline constexpr double kResidueTolerance = 1e-8;

struct ExactnessReport {
  bool exact = true;
  std::vector<Residue> residues;
};

/// f dz is exact iff every finite residue vanishes; each residue is compared
/// with the largest principal-part coefficient at its own pole.
inline ExactnessReport isExact(const RationalFunction& f, double tol = kResidueTolerance) {
  ExactnessReport out;
  const auto pf = partialFractions(f);
  for (std::size_t i = 0; i < pf.terms.size();) {
    const cplx pole = pf.terms[i].pole;
    double scale = 0.0;
    cplx res{};
    std::size_t j = i;
    for (; j < pf.terms.size() && pf.terms[j].pole == pole; ++j) {
      scale = std::max(scale, std::abs(pf.terms[j].coefficient));
      if (pf.terms[j].order == 1) res = pf.terms[j].coefficient;
    }
    out.residues.push_back({pole, res});
    if (std::abs(res) > tol * scale) out.exact = false;
    i = j;
  }
  return out;
}

/// Rational primitive with zero integration constant:
/// int p - sum_a sum_{j >= 2} c_{a,j} / ((j - 1) (z - a)^(j - 1)).
inline RationalFunction primitive(const RationalFunction& f, double tol = kResidueTolerance) {
  if (!isExact(f, tol).exact) throw DomainError("f has a nonzero residue; no rational primitive");
  const auto pf = partialFractions(f);

  struct PoleBlock {
    cplx a;
    int order = 0;
  };
  std::vector<PoleBlock> blocks;
  for (const auto& t : pf.terms) {
    if (blocks.empty() || blocks.back().a != t.pole) blocks.push_back({t.pole, 0});
    blocks.back().order = std::max(blocks.back().order, t.order);
  }

  // Common denominator prod (z - a)^(m_a - 1).
  auto denomExcept = [&](std::size_t skip) {
    std::vector<Root> rs;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (b != skip && blocks[b].order > 1) rs.push_back({blocks[b].a, blocks[b].order - 1});
    return Poly::fromRoots(rs);
  };
  const Poly den = denomExcept(blocks.size());

  Poly num = pf.polynomialPart.antiderivative() * den;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Poly others = denomExcept(b);
    const int top = blocks[b].order - 1;
    for (const auto& t : pf.terms) {
      if (t.pole != blocks[b].a || t.order < 2) continue;
      // -c/((j-1)(z-a)^(j-1)) over (z-a)^top -> -c/(j-1) (z-a)^(top-j+1).
      const Poly shift = Poly::fromRoots(std::vector<Root>{{t.pole, top - (t.order - 1)}});
      num = num + shift * others * (-t.coefficient / static_cast<double>(t.order - 1));
    }
  }
  return RationalFunction::fromCoprime(std::move(num), den);
}

struct DessinPole {
  cplx pole;
  int order = 0;
  int rayCount = 0; // 2 * order
};

/// Finite poles of an exact f, each of order >= 2 with 2m incident rays.
inline std::vector<DessinPole> dessinPoleCheck(const RationalFunction& f, double tol = kResidueTolerance) {
  if (!isExact(f, tol).exact) throw DomainError("dessin pole check needs an exact f");
  std::vector<DessinPole> out;
  for (const auto& p : poleFactorization(f)) {
    if (p.multiplicity < 2)
      throw NumericFailure("exact f reported with a simple pole; residue tolerance inconsistent");
    out.push_back({p.value, p.multiplicity, 2 * p.multiplicity});
  }
  return out;
}

} // namespace inflectus
