//! Intersection lattice of a central arrangement: flats, Möbius function,
//! characteristic polynomial, and the count polynomials of the affine and
//! projective complements.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arrangement::CentralArrangement;
use crate::linalg::primitive_integer_vector;
use crate::poly::IntPoly;
use crate::{Error, Result};

/// A flat: the intersection of the hyperplanes in `members`, which is
/// closed (contains every hyperplane through that intersection).
/// `rank` is its codimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub members: u128,
    pub rank: usize,
}

impl Flat {
    pub fn member_indices(&self) -> Vec<usize> {
        (0..128).filter(|i| self.members >> i & 1 == 1).collect()
    }

    pub fn member_count(&self) -> usize {
        self.members.count_ones() as usize
    }
}

/// The full intersection lattice with one Möbius value μ(0̂, X) per flat.
/// Flats are ordered by rank, then by member mask, so prefixes of the list
/// are order ideals.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    dim: usize,
    flats: Vec<Flat>,
    mobius: Vec<BigInt>,
}

// Rows of a reduced row-echelon basis, each tagged with its pivot column,
// kept sorted by pivot. Pivot entries are 1 and are zero in all other rows,
// so reduction against the basis is a single pass.
type Rref = Vec<(usize, Vec<BigRational>)>;

fn reduce_against(v: &[BigRational], basis: &Rref) -> Vec<BigRational> {
    let mut v = v.to_vec();
    for (p, row) in basis {
        let c = v[*p].clone();
        if c.is_zero() {
            continue;
        }
        for (x, r) in v.iter_mut().zip(row) {
            *x -= &c * r;
        }
    }
    v
}

fn insert_into_rref(basis: &mut Rref, reduced: &[BigRational]) {
    let p = reduced
        .iter()
        .position(|c| !c.is_zero())
        .expect("cannot insert the zero vector into a basis");
    let lead = reduced[p].clone();
    let row: Vec<BigRational> = reduced.iter().map(|c| c / &lead).collect();
    for (_, r) in basis.iter_mut() {
        let c = r[p].clone();
        if c.is_zero() {
            continue;
        }
        for (x, y) in r.iter_mut().zip(&row) {
            *x -= &c * y;
        }
    }
    let at = basis.partition_point(|(q, _)| *q < p);
    basis.insert(at, (p, row));
}

impl IntersectionLattice {
    /// Build the lattice by breadth-first closure search: from each flat,
    /// the reduced normals of the remaining hyperplanes are grouped by
    /// direction, and each direction class spans exactly one covering flat.
    pub fn build(a: &CentralArrangement) -> Result<IntersectionLattice> {
        let d = a.degree();
        if d > 128 {
            return Err(Error::TooManyHyperplanes(d));
        }
        let normals: Vec<Vec<BigRational>> = a
            .normal_rows()
            .iter()
            .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect())
            .collect();

        let mut flats = vec![Flat { members: 0, rank: 0 }];
        let mut seen: HashSet<u128> = HashSet::new();
        seen.insert(0);
        let mut level: Vec<(u128, Rref)> = vec![(0, Vec::new())];
        let mut rank = 0usize;
        while !level.is_empty() {
            rank += 1;
            let mut next: Vec<(u128, Rref)> = Vec::new();
            let mut level_flats: Vec<u128> = Vec::new();
            for (mask, basis) in &level {
                // Group the hyperplanes outside this flat by the direction
                // of their normal modulo the flat's span: two hyperplanes
                // close to the same covering flat iff those directions agree.
                let mut groups: HashMap<Vec<BigInt>, (u128, Vec<BigRational>)> = HashMap::new();
                for j in 0..d {
                    if mask >> j & 1 == 1 {
                        continue;
                    }
                    let v = reduce_against(&normals[j], basis);
                    debug_assert!(
                        v.iter().any(|c| !c.is_zero()),
                        "flat member sets must be closed"
                    );
                    let mut key = primitive_integer_vector(&v);
                    if key.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative) {
                        for c in &mut key {
                            *c = -&*c;
                        }
                    }
                    groups.entry(key).or_insert((0, v)).0 |= 1 << j;
                }
                for (bits, v) in groups.into_values() {
                    let child = mask | bits;
                    if seen.insert(child) {
                        let mut child_basis = basis.clone();
                        insert_into_rref(&mut child_basis, &v);
                        level_flats.push(child);
                        next.push((child, child_basis));
                    }
                }
            }
            level_flats.sort_unstable();
            flats.extend(level_flats.into_iter().map(|members| Flat { members, rank }));
            level = next;
        }

        // Möbius by the defining recursion, top-down in rank order; Y ≤ X
        // in the lattice exactly when members(Y) ⊆ members(X).
        let mut mobius = vec![BigInt::one()];
        for i in 1..flats.len() {
            let mi = flats[i].members;
            let mut acc = BigInt::zero();
            for j in 0..i {
                if flats[j].members & mi == flats[j].members {
                    acc += &mobius[j];
                }
            }
            mobius.push(-acc);
        }

        Ok(IntersectionLattice {
            dim: a.ambient_dim(),
            flats,
            mobius,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn mobius(&self) -> &[BigInt] {
        &self.mobius
    }

    pub fn flat_count(&self) -> usize {
        self.flats.len()
    }

    /// Number of flats at each rank, from 0 up to the lattice's top rank.
    pub fn flat_counts_by_rank(&self) -> Vec<usize> {
        let mut counts = BTreeMap::new();
        for f in &self.flats {
            *counts.entry(f.rank).or_insert(0usize) += 1;
        }
        (0..=*counts.keys().max().unwrap()).map(|r| counts.get(&r).copied().unwrap_or(0)).collect()
    }

    /// χ(t) = Σ_X μ(X) t^{dim X}: the count polynomial of the affine
    /// complement over a finite field with good reduction.
    pub fn characteristic_polynomial(&self) -> IntPoly {
        let mut acc = IntPoly::zero();
        for (f, mu) in self.flats.iter().zip(&self.mobius) {
            acc = acc.add(&IntPoly::monomial(mu.clone(), self.dim - f.rank));
        }
        acc
    }

    /// χ(t)/(t−1): the count polynomial of the projective complement.
    pub fn projective_count_polynomial(&self) -> IntPoly {
        let chi = self.characteristic_polynomial();
        let t_minus_1 = IntPoly::from_coeffs(vec![-1i64, 1]);
        chi.div_exact(&t_minus_1)
            .expect("the characteristic polynomial of a central arrangement is divisible by t-1")
    }

    /// Topological Euler characteristic of the projective complement:
    /// the projective count polynomial at t = 1. Zero exactly for
    /// reducible essential arrangements.
    pub fn projective_euler_characteristic(&self) -> BigInt {
        self.projective_count_polynomial().eval(&BigInt::one())
    }
}

/// Betti numbers of a projective arrangement complement from its count
/// polynomial P of degree n: b_m = (−1)^m · coeff(t^{n−m}). Rejects input
/// whose coefficients fail to alternate in sign.
pub fn betti_from_count_poly(p: &IntPoly) -> Result<Vec<BigInt>> {
    let n = p.degree();
    let mut betti = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut b = p.coeff(n - m);
        if m % 2 == 1 {
            b = -b;
        }
        if b.is_negative() {
            return Err(Error::NotAlternating);
        }
        betti.push(b);
    }
    Ok(betti)
}
