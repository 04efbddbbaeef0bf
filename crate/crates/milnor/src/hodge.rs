//! Eigenspace cohomology tables of Milnor fibers built from irreducible
//! factors, Hodge-type bookkeeping (Tate check), E-polynomials, and the
//! unique candidate count polynomial they determine.
//!
//! Tables are exact inventories: each (eigenvalue, degree) slot holds a
//! number of classes of known type (p,p) plus a number of classes whose
//! Hodge type is unknown. Unknown types are tracked explicitly and poison
//! every quantity that needs them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arrangement::CentralArrangement;
use crate::decompose::irreducible_decomposition;
use crate::lattice::{betti_from_count_poly, IntersectionLattice};
use crate::linalg::int_rank;
use crate::poly::{binomial, IntPoly};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct DegreeEntry {
    /// Number of classes of Tate type (p,p), keyed by p.
    typed: BTreeMap<usize, u64>,
    /// Number of classes of unknown Hodge type.
    untyped: u64,
}

impl DegreeEntry {
    fn dim(&self) -> u64 {
        self.typed.values().sum::<u64>() + self.untyped
    }
}

/// Cohomology of a smooth affine variety of complex dimension `n` carrying
/// a monodromy action of order `order`: one entry per eigenvalue index
/// k ∈ {0, …, order−1} (the eigenvalue being e^{2πik/order}) and degree
/// m ∈ {0, …, n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    n: usize,
    order: usize,
    entries: BTreeMap<(usize, usize), DegreeEntry>,
}

// One eigenvalue's worth of classes: (degree, Some(p) for type (p,p) or
// None for unknown) mapped to a count.
type EigenPart = BTreeMap<(usize, Option<usize>), u64>;

fn tensor(a: &EigenPart, b: &EigenPart) -> EigenPart {
    let mut out = EigenPart::new();
    for (&(ma, ta), &ca) in a {
        for (&(mb, tb), &cb) in b {
            let ty = match (ta, tb) {
                (Some(pa), Some(pb)) => Some(pa + pb),
                _ => None,
            };
            *out.entry((ma + mb, ty)).or_insert(0) += ca * cb;
        }
    }
    out
}

impl CohomologyTable {
    pub fn new(n: usize, order: usize) -> Self {
        assert!(order >= 1, "eigenvalue order must be positive");
        CohomologyTable {
            n,
            order,
            entries: BTreeMap::new(),
        }
    }

    /// Record `count` classes of type (p,p) in H^m at eigenvalue index k.
    pub fn add_typed(&mut self, k: usize, m: usize, p: usize, count: u64) {
        assert!(k < self.order && m <= self.n && p <= m, "class out of range");
        if count > 0 {
            *self.entries.entry((k, m)).or_default().typed.entry(p).or_insert(0) += count;
        }
    }

    /// Record `count` classes of unknown Hodge type in H^m at eigenvalue k.
    pub fn add_untyped(&mut self, k: usize, m: usize, count: u64) {
        assert!(k < self.order && m <= self.n, "class out of range");
        if count > 0 {
            self.entries.entry((k, m)).or_default().untyped += count;
        }
    }

    /// Complex dimension of the variety.
    pub fn complex_dim(&self) -> usize {
        self.n
    }

    /// Order of the monodromy whose eigenvalues index the table.
    pub fn eigenvalue_order(&self) -> usize {
        self.order
    }

    pub fn dim(&self, k: usize, m: usize) -> u64 {
        self.entries.get(&(k, m)).map_or(0, DegreeEntry::dim)
    }

    /// Dimensions of H^0 … H^n at eigenvalue index k.
    pub fn dims(&self, k: usize) -> Vec<u64> {
        (0..=self.n).map(|m| self.dim(k, m)).collect()
    }

    /// Classes in H^m at eigenvalue k as (type, count) pairs, typed ones
    /// first in increasing p, then the untyped pool.
    pub fn classes(&self, k: usize, m: usize) -> Vec<(Option<usize>, u64)> {
        let mut out = Vec::new();
        if let Some(e) = self.entries.get(&(k, m)) {
            out.extend(e.typed.iter().map(|(&p, &c)| (Some(p), c)));
            if e.untyped > 0 {
                out.push((None, e.untyped));
            }
        }
        out
    }

    /// True iff every class has a known diagonal Hodge type.
    pub fn is_tate(&self) -> bool {
        self.entries.values().all(|e| e.untyped == 0)
    }

    /// Alternating sum Σ_m (−1)^m dim H^m at eigenvalue k.
    pub fn eigen_euler(&self, k: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for m in 0..=self.n {
            let d = BigInt::from(self.dim(k, m));
            if m % 2 == 0 {
                acc += d;
            } else {
                acc -= d;
            }
        }
        acc
    }

    /// Every eigenvalue's alternating dimension sum must equal the Euler
    /// characteristic of the projective complement.
    pub fn zeta_check(&self, chi: &BigInt) -> bool {
        (0..self.order).all(|k| self.eigen_euler(k) == *chi)
    }

    /// E-polynomial in the variable t = xy. Each H^m class of type (p,p)
    /// pairs with a compactly supported class of type (n−p, n−p) in degree
    /// 2n−m, so HD(t) = Σ_m (−1)^m Σ_{(p,p) ∈ H^m} t^{n−p}.
    pub fn e_polynomial(&self) -> Result<IntPoly> {
        let mut acc = IntPoly::zero();
        for ((_, m), e) in &self.entries {
            if e.untyped > 0 {
                return Err(Error::NotTate);
            }
            for (&p, &c) in &e.typed {
                let coeff = if m % 2 == 0 {
                    BigInt::from(c)
                } else {
                    -BigInt::from(c)
                };
                acc = acc.add(&IntPoly::monomial(coeff, self.n - p));
            }
        }
        Ok(acc)
    }

    /// The unique polynomial P with P(t) = HD(t): the only possible count
    /// polynomial if the variety has polynomial count.
    pub fn katz_candidate(&self) -> Result<IntPoly> {
        self.e_polynomial()
    }

    fn part(&self, k: usize) -> EigenPart {
        let mut out = EigenPart::new();
        for ((kk, m), e) in &self.entries {
            if *kk != k {
                continue;
            }
            for (&p, &c) in &e.typed {
                *out.entry((*m, Some(p))).or_insert(0) += c;
            }
            if e.untyped > 0 {
                *out.entry((*m, None)).or_insert(0) += e.untyped;
            }
        }
        out
    }
}

fn big_to_u64(b: &BigInt) -> u64 {
    u64::try_from(b).expect("dimension fits in 64 bits")
}

/// Cohomology of the (q−1)-dimensional affine torus: degree k has
/// dimension C(q−1, k), type (k,k). `torus_table(1)` is a point.
pub fn torus_table(q: usize) -> CohomologyTable {
    assert!(q >= 1, "torus factor count must be positive");
    let mut t = CohomologyTable::new(q - 1, 1);
    for m in 0..q {
        t.add_typed(0, m, m, big_to_u64(&binomial(q - 1, m)));
    }
    t
}

/// Milnor-fiber table of the generic-type arrangement of m+2 hyperplanes
/// in ℂ^{m+1}, m even: the unit eigenvalue carries the cohomology of the
/// projective complement (dim C(m+1, j) in degree j, type (j,j)); each of
/// the m+1 other eigenvalues carries a single class in degree m, of type
/// (m/2, m/2) at eigenvalue −1 and of unknown type elsewhere.
pub fn generic_factor_table(m: usize) -> Result<CohomologyTable> {
    if m == 0 {
        return Err(Error::BadAmbientDimension);
    }
    if m % 2 == 1 {
        return Err(Error::OddGenericDimension(m));
    }
    let d = m + 2;
    let mut t = CohomologyTable::new(m, d);
    for j in 0..=m {
        t.add_typed(0, j, j, big_to_u64(&binomial(m + 1, j)));
    }
    for k in 1..d {
        if 2 * k == d {
            t.add_typed(k, m, m / 2, 1);
        } else {
            t.add_untyped(k, m, 1);
        }
    }
    Ok(t)
}

/// Tensor the factor tables with the torus carrying the product structure.
///
/// For each eigenvalue β ∈ μ_{d₀} (d₀ = GCD of the factor degrees), the
/// β-part of the product is torus ⊗ (β-parts of all factors), with degrees
/// and Tate weights adding and unknown types absorbing.
pub fn product_table(factors: &[CohomologyTable], degrees: &[usize]) -> Result<CohomologyTable> {
    if factors.is_empty() || factors.len() != degrees.len() {
        return Err(Error::Internal(
            "product_table needs one degree per factor table".into(),
        ));
    }
    for (f, &dj) in factors.iter().zip(degrees) {
        if f.eigenvalue_order() != dj {
            return Err(Error::Internal(format!(
                "factor table has eigenvalue order {}, expected degree {dj}",
                f.eigenvalue_order()
            )));
        }
    }
    let q = factors.len();
    let d0 = degrees.iter().copied().fold(0usize, num_integer::gcd);
    let n = q - 1 + factors.iter().map(CohomologyTable::complex_dim).sum::<usize>();
    let torus_part = torus_table(q).part(0);

    let mut out = CohomologyTable::new(n, d0);
    for k0 in 0..d0 {
        let mut part = torus_part.clone();
        for (f, &dj) in factors.iter().zip(degrees) {
            let kj = k0 * (dj / d0);
            let fp = f.part(kj);
            if fp.is_empty() {
                return Err(Error::MissingEigenvalue {
                    index: kj,
                    order: dj,
                });
            }
            part = tensor(&part, &fp);
        }
        for ((m, ty), c) in part {
            match ty {
                Some(p) => out.add_typed(k0, m, p, c),
                None => out.add_untyped(k0, m, c),
            }
        }
    }
    Ok(out)
}

// A factor of degree r+1 in ℂ^r is of generic type iff every r of its
// normals are independent.
fn is_generic_position(factor: &CentralArrangement) -> bool {
    let r = factor.ambient_dim();
    let rows = factor.normal_rows();
    (0..rows.len()).all(|skip| {
        let sub: Vec<_> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, row)| row.clone())
            .collect();
        int_rank(&sub, r) == r
    })
}

/// Milnor-fiber cohomology table of an essential arrangement whose
/// irreducible factors are all single hyperplanes or even-dimensional
/// generic-type arrangements — the class for which every Hodge type is
/// known.
pub fn milnor_fiber_table(a: &CentralArrangement) -> Result<CohomologyTable> {
    let dec = irreducible_decomposition(a)?;
    let mut tables = Vec::new();
    for (j, factor) in dec.factors().iter().enumerate() {
        let dj = factor.degree();
        let r = factor.ambient_dim();
        if dj == 1 {
            // Single hyperplane: the fiber is a point.
            tables.push(torus_table(1));
        } else if dj == r + 1 && is_generic_position(factor) {
            tables.push(generic_factor_table(r - 1)?);
        } else {
            return Err(Error::UnsupportedFactor { block: j, size: dj });
        }
    }
    product_table(&tables, &dec.factor_sizes())
}

/// Pure table of the projective complement: degree m carries b_m classes
/// of type (m,m), with Betti numbers read off the count polynomial.
pub fn projective_complement_table(a: &CentralArrangement) -> Result<CohomologyTable> {
    let lat = IntersectionLattice::build(a)?;
    let betti = betti_from_count_poly(&lat.projective_count_polynomial())?;
    let mut t = CohomologyTable::new(a.ambient_dim() - 1, 1);
    for (m, b) in betti.iter().enumerate() {
        t.add_typed(0, m, m, big_to_u64(b));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{a_family, boolean, generic, CentralArrangement};

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(cs.to_vec())
    }

    #[test]
    fn torus_tables_are_pure_binomials() {
        let t = torus_table(1);
        assert_eq!(t.dims(0), vec![1]);
        assert!(t.is_tate());

        let t = torus_table(2);
        assert_eq!(t.dims(0), vec![1, 1]);
        assert_eq!(t.e_polynomial().unwrap(), poly(&[-1, 1]));

        let t = torus_table(3);
        assert_eq!(t.dims(0), vec![1, 2, 1]);
        assert!(t.zeta_check(&BigInt::zero()));
    }

    #[test]
    fn generic_factor_tables_match_hand_values() {
        let g2 = generic_factor_table(2).unwrap();
        assert_eq!(g2.eigenvalue_order(), 4);
        assert_eq!(g2.dims(0), vec![1, 3, 3]);
        assert_eq!(g2.classes(0, 1), vec![(Some(1), 3)]);
        assert_eq!(g2.classes(2, 2), vec![(Some(1), 1)]);
        assert_eq!(g2.classes(1, 2), vec![(None, 1)]);
        assert_eq!(g2.classes(3, 2), vec![(None, 1)]);
        assert!(!g2.is_tate());
        assert!(matches!(g2.e_polynomial(), Err(Error::NotTate)));
        assert!(g2.zeta_check(&BigInt::from(1)));

        let g4 = generic_factor_table(4).unwrap();
        assert_eq!(g4.eigenvalue_order(), 6);
        assert_eq!(g4.dims(0), vec![1, 5, 10, 10, 5]);
        assert_eq!(g4.classes(3, 4), vec![(Some(2), 1)]);
        assert_eq!(g4.dim(1, 4), 1);
        assert!(g4.zeta_check(&BigInt::from(1)));

        assert!(matches!(
            generic_factor_table(1),
            Err(Error::OddGenericDimension(1))
        ));
        assert!(matches!(
            generic_factor_table(3),
            Err(Error::OddGenericDimension(3))
        ));
    }

    #[test]
    fn product_family_table_matches_tensor_oracle() {
        let t = milnor_fiber_table(&a_family(1, 1).unwrap()).unwrap();
        assert_eq!(t.complex_dim(), 7);
        assert_eq!(t.eigenvalue_order(), 2);
        assert_eq!(t.dims(0), vec![1, 9, 36, 83, 120, 110, 60, 15]);
        // Oracle: coefficients of (1+s)(1+3s+3s²)(1+5s+10s²+10s³+5s⁴).
        let poincare = poly(&[1, 1]).mul(&poly(&[1, 3, 3])).mul(&poly(&[1, 5, 10, 10, 5]));
        let dims: Vec<u64> = t.dims(0);
        for (m, c) in poincare.coeffs().iter().enumerate() {
            assert_eq!(BigInt::from(dims[m]), *c);
        }
        // Eigenvalue −1: two one-dimensional slots of types (3,3), (4,4).
        assert_eq!(t.dims(1), vec![0, 0, 0, 0, 0, 0, 1, 1]);
        assert_eq!(t.classes(1, 6), vec![(Some(3), 1)]);
        assert_eq!(t.classes(1, 7), vec![(Some(4), 1)]);
        assert!(t.is_tate());
        assert!(t.zeta_check(&BigInt::zero()));
        assert_eq!(
            t.e_polynomial().unwrap(),
            poly(&[-15, 60, -110, 119, -82, 36, -9, 1])
        );
    }

    #[test]
    fn minus_one_eigenspace_dims_follow_the_binomial_law() {
        for (u, v) in [(1usize, 1usize), (2, 1), (1, 2)] {
            let t = milnor_fiber_table(&a_family(u, v).unwrap()).unwrap();
            assert_eq!(t.eigenvalue_order(), 2);
            let offset = 2 * u + 4 * v;
            let q = u + v;
            let mut total = 0u64;
            for m in 0..=t.complex_dim() {
                let expect = if m >= offset {
                    big_to_u64(&binomial(q - 1, m - offset))
                } else {
                    0
                };
                assert_eq!(t.dim(1, m), expect, "(u,v)=({u},{v}), m={m}");
                total += t.dim(1, m);
            }
            assert_eq!(total, 1 << (q - 1));
            assert!(t.zeta_check(&BigInt::zero()));
        }
    }

    #[test]
    fn boolean_fiber_is_a_torus() {
        let t = milnor_fiber_table(&boolean(3).unwrap()).unwrap();
        assert_eq!(t.eigenvalue_order(), 1);
        assert_eq!(t.dims(0), vec![1, 2, 1]);
        assert_eq!(t.katz_candidate().unwrap(), poly(&[1, -2, 1]));
    }

    #[test]
    fn unit_monodromy_candidate_equals_projective_count_polynomial() {
        // Generic factor times a free coordinate: d₀ = GCD(4, 1) = 1.
        let a = generic(2).unwrap().product(&boolean(1).unwrap());
        let t = milnor_fiber_table(&a).unwrap();
        assert_eq!(t.eigenvalue_order(), 1);
        assert_eq!(t.dims(0), vec![1, 4, 6, 3]);
        let candidate = t.katz_candidate().unwrap();
        let lat = IntersectionLattice::build(&a).unwrap();
        assert_eq!(candidate, lat.projective_count_polynomial());
        assert_eq!(candidate, poly(&[-3, 6, -4, 1]));
    }

    #[test]
    fn projective_complement_tables_recover_count_polynomials() {
        for a in [generic(2).unwrap(), generic(4).unwrap(), boolean(3).unwrap()] {
            let t = projective_complement_table(&a).unwrap();
            assert!(t.is_tate());
            let lat = IntersectionLattice::build(&a).unwrap();
            assert_eq!(t.e_polynomial().unwrap(), lat.projective_count_polynomial());
        }
        let g2 = projective_complement_table(&generic(2).unwrap()).unwrap();
        assert_eq!(g2.e_polynomial().unwrap(), poly(&[3, -3, 1]));
    }

    #[test]
    fn unsupported_factors_are_reported() {
        // Four concurrent lines in the plane: irreducible but not generic.
        let pencil4 = CentralArrangement::from_integer_rows(&[
            vec![1i64, 0],
            vec![0, 1],
            vec![1, 1],
            vec![1, -1],
        ])
        .unwrap();
        assert!(matches!(
            milnor_fiber_table(&pencil4),
            Err(Error::UnsupportedFactor { block: 0, size: 4 })
        ));

        // An odd-dimensional generic factor is recognized but untyped.
        let g3 = generic(3).unwrap();
        assert!(matches!(
            milnor_fiber_table(&g3),
            Err(Error::OddGenericDimension(3))
        ));
    }

    #[test]
    fn missing_eigenvalues_fail_the_product() {
        let mut partial = CohomologyTable::new(2, 4);
        partial.add_typed(0, 0, 0, 1);
        let err = product_table(&[partial], &[4]).unwrap_err();
        assert!(matches!(err, Error::MissingEigenvalue { order: 4, .. }));
    }

    #[test]
    fn single_factor_product_is_the_identity() {
        let g2 = generic_factor_table(2).unwrap();
        let p = product_table(&[g2.clone()], &[4]).unwrap();
        assert_eq!(p.complex_dim(), g2.complex_dim());
        for k in 0..4 {
            assert_eq!(p.dims(k), g2.dims(k));
            for m in 0..=2 {
                assert_eq!(p.classes(k, m), g2.classes(k, m));
            }
        }
    }
}
