//! Irreducible decomposition of an essential central arrangement, the
//! order of the Milnor-fiber monodromy, and the triviality decision.
//!
//! The finest direct-sum partition of the hyperplanes coincides with the
//! connected components of the linear matroid of the normal vectors, so it
//! is computed exactly from the fundamental circuits of one basis. Two
//! independent cross-checks run on every call: the block ranks must add up
//! to the ambient dimension, and every factor must pass the Euler-
//! characteristic irreducibility test (χ of the projective complement ≠ 0).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arrangement::CentralArrangement;
use crate::lattice::IntersectionLattice;
use crate::{Error, Result};

/// The finest partition 𝒜 = 𝒜₁ × ⋯ × 𝒜_q into irreducible factors.
#[derive(Clone, Debug)]
pub struct Decomposition {
    blocks: Vec<Vec<usize>>,
    factors: Vec<CentralArrangement>,
}

impl Decomposition {
    /// Number of irreducible factors q.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Hyperplane indices of each block, sorted; blocks ordered by
    /// smallest member.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Each factor realized as an essential arrangement in coordinates for
    /// the rational span of its normals.
    pub fn factors(&self) -> &[CentralArrangement] {
        &self.factors
    }

    /// Factor degrees d_1, …, d_q.
    pub fn factor_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// d₀ = GCD(d_1, …, d_q): the order of the monodromy on the total
    /// cohomology of the Milnor fiber.
    pub fn monodromy_order(&self) -> usize {
        self.factor_sizes()
            .into_iter()
            .fold(0usize, num_integer::gcd)
    }

    /// True iff the monodromy acts as the identity, i.e. d₀ = 1.
    pub fn is_trivial(&self) -> bool {
        self.monodromy_order() == 1
    }

    pub fn is_reducible(&self) -> bool {
        self.blocks.len() > 1
    }
}

fn format_block(block: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < block.len() {
        let mut j = i;
        while j + 1 < block.len() && block[j + 1] == block[j] + 1 {
            j += 1;
        }
        if i == j {
            parts.push(block[i].to_string());
        } else {
            parts.push(format!("{}..{}", block[i], block[j]));
        }
        i = j + 1;
    }
    format!("[{}]", parts.join(","))
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks.iter().map(|b| format_block(b)).collect();
        let sizes: Vec<String> = self.factor_sizes().iter().map(usize::to_string).collect();
        write!(
            f,
            "q={} blocks={} d=({}) d0={} trivial={}",
            self.block_count(),
            blocks.join(""),
            sizes.join(","),
            self.monodromy_order(),
            self.is_trivial()
        )
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Compute the finest valid partition of an essential arrangement.
///
/// One pass of exact Gaussian elimination picks a basis among the normals;
/// every non-basis normal is expressed in that basis, and its fundamental
/// circuit (its support plus itself) is merged in a union-find. Elements
/// in no circuit (coloops) stay as singleton blocks.
pub fn irreducible_decomposition(a: &CentralArrangement) -> Result<Decomposition> {
    if !a.is_essential() {
        return Err(Error::NotEssential);
    }
    let d = a.degree();
    let dim = a.ambient_dim();
    let normals: Vec<Vec<BigRational>> = a
        .normal_rows()
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();

    let mut uf = UnionFind::new(d);
    let zero = BigRational::zero();
    // Echelon rows in insertion order, each with its pivot column and its
    // expression in the basis normals chosen so far: rows[i] = Σ_k
    // combos[i][k] · u_{basis_idx[k]} (missing trailing entries are zero).
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut combos: Vec<Vec<BigRational>> = Vec::new();
    let mut basis_idx: Vec<usize> = Vec::new();

    for e in 0..d {
        let mut v = normals[e].clone();
        let mut c = vec![zero.clone(); rows.len()];
        for i in 0..rows.len() {
            let p = pivots[i];
            if v[p].is_zero() {
                continue;
            }
            let f = &v[p] / &rows[i][p];
            for (x, r) in v.iter_mut().zip(&rows[i]) {
                *x -= &f * r;
            }
            c[i] = f;
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                // u_e = Σ_k coeff_k · u_{basis_idx[k]}; merge its circuit.
                for (k, &b) in basis_idx.iter().enumerate() {
                    let mut coeff = zero.clone();
                    for i in 0..rows.len() {
                        if let Some(t) = combos[i].get(k) {
                            coeff += &c[i] * t;
                        }
                    }
                    if !coeff.is_zero() {
                        uf.union(e, b);
                    }
                }
            }
            Some(p) => {
                // v = u_e − Σ_i c_i · rows[i] becomes a new basis row.
                let mut combo = vec![zero.clone(); basis_idx.len() + 1];
                for (k, slot) in combo.iter_mut().enumerate().take(basis_idx.len()) {
                    for i in 0..rows.len() {
                        if let Some(t) = combos[i].get(k) {
                            *slot -= &c[i] * t;
                        }
                    }
                }
                combo[basis_idx.len()] = BigRational::one();
                basis_idx.push(e);
                pivots.push(p);
                rows.push(v);
                combos.push(combo);
            }
        }
    }

    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for e in 0..d {
        let r = uf.find(e);
        by_root.entry(r).or_default().push(e);
    }
    let mut blocks: Vec<Vec<usize>> = by_root.into_values().collect();
    blocks.sort_by_key(|b| b[0]);

    let factors = blocks
        .iter()
        .map(|b| Ok(a.restriction(b)?.essentialize()))
        .collect::<Result<Vec<_>>>()?;

    // Cross-check 1: the factor dimensions must sum to the ambient
    // dimension (direct-sum condition).
    let rank_sum: usize = factors.iter().map(CentralArrangement::ambient_dim).sum();
    if rank_sum != dim {
        return Err(Error::Internal(format!(
            "block ranks sum to {rank_sum}, ambient dimension is {dim}"
        )));
    }
    // Cross-check 2: every factor must be irreducible, i.e. have nonzero
    // projective Euler characteristic.
    for (j, factor) in factors.iter().enumerate() {
        let euler = IntersectionLattice::build(factor)?.projective_euler_characteristic();
        if euler.is_zero() {
            return Err(Error::Internal(format!(
                "factor {j} fails the Euler-characteristic irreducibility test"
            )));
        }
    }

    Ok(Decomposition { blocks, factors })
}

/// Order of the Milnor-fiber monodromy: GCD of the factor degrees.
pub fn monodromy_order(a: &CentralArrangement) -> Result<usize> {
    Ok(irreducible_decomposition(a)?.monodromy_order())
}

/// Triviality verdict together with the evidence backing it.
#[derive(Clone, Debug)]
pub struct MonodromyReport {
    pub decomposition: Decomposition,
    /// χ of the projective complement, computed from the full intersection
    /// lattice, independently of the partition.
    pub projective_euler: BigInt,
}

impl MonodromyReport {
    pub fn trivial(&self) -> bool {
        self.decomposition.is_trivial()
    }
}

/// Decide monodromy triviality and cross-check the partition-based
/// reducibility against the Euler-characteristic criterion
/// (reducible ⟺ χ of the projective complement = 0).
pub fn monodromy_report(a: &CentralArrangement) -> Result<MonodromyReport> {
    let decomposition = irreducible_decomposition(a)?;
    let projective_euler = IntersectionLattice::build(a)?.projective_euler_characteristic();
    if decomposition.is_reducible() != projective_euler.is_zero() {
        return Err(Error::Internal(format!(
            "partition says reducible={}, Euler characteristic is {}",
            decomposition.is_reducible(),
            projective_euler
        )));
    }
    Ok(MonodromyReport {
        decomposition,
        projective_euler,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{a_family, boolean, generic, CentralArrangement};

    #[test]
    fn independent_normals_split_into_singletons() {
        let dec = irreducible_decomposition(&boolean(3).unwrap()).unwrap();
        assert_eq!(dec.block_count(), 3);
        assert_eq!(dec.factor_sizes(), vec![1, 1, 1]);
        assert_eq!(dec.monodromy_order(), 1);
        assert!(dec.is_trivial());
        assert_eq!(dec.to_string(), "q=3 blocks=[0][1][2] d=(1,1,1) d0=1 trivial=true");
    }

    #[test]
    fn generic_arrangements_are_irreducible() {
        let dec = irreducible_decomposition(&generic(2).unwrap()).unwrap();
        assert_eq!(dec.block_count(), 1);
        assert_eq!(dec.monodromy_order(), 4);
        assert!(!dec.is_trivial());

        assert_eq!(monodromy_order(&generic(4).unwrap()).unwrap(), 6);
    }

    #[test]
    fn product_family_splits_with_gcd_two() {
        let dec = irreducible_decomposition(&a_family(1, 1).unwrap()).unwrap();
        assert_eq!(dec.block_count(), 2);
        assert_eq!(dec.factor_sizes(), vec![4, 6]);
        assert_eq!(dec.monodromy_order(), 2);
        assert!(!dec.is_trivial());
        assert_eq!(
            dec.to_string(),
            "q=2 blocks=[0..3][4..9] d=(4,6) d0=2 trivial=false"
        );
        // Factors are essential in the expected dimensions.
        assert_eq!(dec.factors()[0].ambient_dim(), 3);
        assert_eq!(dec.factors()[1].ambient_dim(), 5);
        assert!(dec.factors().iter().all(CentralArrangement::is_essential));
    }

    #[test]
    fn near_pencil_has_trivial_monodromy() {
        let a = CentralArrangement::from_integer_rows(&[
            vec![1i64, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![0, 0, 1],
        ])
        .unwrap();
        let dec = irreducible_decomposition(&a).unwrap();
        assert_eq!(dec.factor_sizes(), vec![3, 1]);
        assert_eq!(dec.monodromy_order(), 1);
        assert!(dec.is_trivial());
        assert_eq!(dec.to_string(), "q=2 blocks=[0..2][3] d=(3,1) d0=1 trivial=true");
    }

    #[test]
    fn permuting_hyperplanes_permutes_blocks() {
        // Interleave the two factors of the 10-hyperplane product family.
        let a11 = a_family(1, 1).unwrap();
        let order = [4usize, 0, 5, 1, 6, 2, 7, 3, 8, 9];
        let rows: Vec<Vec<num_bigint::BigInt>> = order
            .iter()
            .map(|&i| a11.normal_rows()[i].clone())
            .collect();
        let shuffled = CentralArrangement::from_integer_rows(&rows).unwrap();
        let dec = irreducible_decomposition(&shuffled).unwrap();
        assert_eq!(dec.block_count(), 2);
        // Positions of the size-3 factor's hyperplanes in the new order.
        assert_eq!(dec.blocks()[0], vec![0, 2, 4, 6, 8, 9]);
        assert_eq!(dec.blocks()[1], vec![1, 3, 5, 7]);
        assert_eq!(dec.monodromy_order(), 2);
    }

    #[test]
    fn non_essential_input_is_rejected() {
        let a =
            CentralArrangement::from_integer_rows(&[vec![1i64, 0, 0], vec![0, 1, 0]]).unwrap();
        assert!(matches!(
            irreducible_decomposition(&a),
            Err(Error::NotEssential)
        ));
    }

    #[test]
    fn report_cross_checks_partition_against_euler_characteristic() {
        let r = monodromy_report(&generic(2).unwrap()).unwrap();
        assert_eq!(r.projective_euler, BigInt::one());
        assert!(!r.trivial());

        let r = monodromy_report(&a_family(1, 1).unwrap()).unwrap();
        assert_eq!(r.projective_euler, BigInt::zero());
        assert!(!r.trivial());

        let r = monodromy_report(&boolean(4).unwrap()).unwrap();
        assert_eq!(r.projective_euler, BigInt::zero());
        assert!(r.trivial());
    }

    #[test]
    fn gcd_is_consistent_across_products() {
        let g2 = generic(2).unwrap();
        let g4 = generic(4).unwrap();
        let p = g2.product(&g4).product(&g2);
        let dec = irreducible_decomposition(&p).unwrap();
        assert_eq!(dec.factor_sizes(), vec![4, 6, 4]);
        assert_eq!(dec.monodromy_order(), 2);

        let b1 = boolean(1).unwrap();
        let q = g2.product(&b1);
        assert_eq!(monodromy_order(&q).unwrap(), 1);
    }
}
