//! Point counting over prime fields for arrangement complements and Milnor
//! fibers.
//!
//! Let `Q` be the product of the defining linear forms of a central
//! arrangement in dimension `n+1`. Three exact counting strategies are
//! provided for the fiber `Q = 1` over `F_p`:
//!
//! * **brute force** — enumerate all `p^(n+1)` points;
//! * **factored** — split `Q` into its irreducible factors `Q_1, ..., Q_q`
//!   living on complementary coordinate blocks of a direct-sum basis, tally
//!   `n_j(a) = #{z : Q_j(z) = a}` per factor, and assemble the fiber count by
//!   convolution over the unit group `F_p^*`. Homogeneity makes `n_j`
//!   constant on cosets of the subgroup of `d_j`-th powers, so only
//!   `gcd(d_j, p-1)` values are ever computed per factor;
//! * **fast** — for factors whose forms are in general position with exactly
//!   one more form than the dimension, replace the per-factor enumeration by
//!   a quadratic-root count: fixing all coordinates but the last leaves a
//!   quadratic equation whose root count is `1 + legendre(discriminant)`.
//!
//! All three agree at *good* primes: primes dividing no minor of the normal
//! matrix (nor of the auxiliary matrices of the factored method). Bad primes
//! are detected exactly and rejected. Every count is exact; totals are
//! accumulated in machine words only where a budget check has already bounded
//! them, and reported as arbitrary-precision integers.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arrangement::CentralArrangement;
use crate::decompose::{irreducible_decomposition, Decomposition};
use crate::linalg::{int_det, int_det_i128, int_rank, prime_factors, primitive_integer_vector, QMat};
use crate::{Error, Result};

/// Default cap on the number of field evaluations a single counting call may
/// perform (one billion). Override with [`PointCounter::with_budget`].
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Largest supported prime modulus: `p < 2^31` keeps every product of two
/// reduced residues inside `u64` and bounds the residue table at 2 GiB.
const MAX_PRIME: u64 = 1 << 31;

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// A prime field `F_p` with a precomputed quadratic-residue table.
///
/// `legendre(a)` is `0` iff `p | a`, `+1` iff `a` is a nonzero square mod
/// `p`, and `-1` otherwise. The table costs `p` bytes and one pass over the
/// field to build, after which lookups are O(1) and the value is read-only,
/// so a field can be shared freely across counting threads.
#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
    table: Vec<i8>,
}

impl PrimeField {
    /// Builds `F_p`, verifying primality by trial division.
    ///
    /// Errors with [`Error::PrimeTooLarge`] when `p >= 2^31` and
    /// [`Error::NotPrime`] when `p` is composite (or below 2).
    pub fn new(p: u64) -> Result<PrimeField> {
        if p >= MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut table = vec![-1i8; p as usize];
        table[0] = 0;
        for y in 1..p {
            table[(y * y % p) as usize] = 1;
        }
        Ok(PrimeField { p, table })
    }

    /// The modulus.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Legendre symbol `(a/p)` of an arbitrary residue.
    pub fn legendre(&self, a: u64) -> i8 {
        self.table[(a % self.p) as usize]
    }

    /// Legendre symbol of an already-reduced residue (`a < p`); skips the
    /// reduction in the counting hot loops.
    fn sym(&self, a: u64) -> i8 {
        self.table[a as usize]
    }
}

/// Primality by trial division; exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut q = 5;
    while q <= n / q {
        if n % q == 0 || n % (q + 2) == 0 {
            return false;
        }
        q += 6;
    }
    true
}

/// `b^e mod p` by square-and-multiply; requires `p < 2^31`.
fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Smallest generator of `F_p^*`, found by checking `g^((p-1)/q) != 1` for
/// every prime `q | p-1`.
fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(&BigInt::from(p - 1));
    for g in 2..p {
        if factors.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1) {
            return g;
        }
    }
    unreachable!("every prime field has a primitive root");
}

/// Canonical residue of an integer, in `0..p`.
fn big_mod_u64(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    u64::try_from(&r).expect("residue fits in u64")
}

/// Canonical residue of a rational whose denominator is a unit mod `p`.
fn rat_mod_u64(x: &BigRational, p: u64) -> Result<u64> {
    let den = big_mod_u64(x.denom(), p);
    if den == 0 {
        return Err(Error::Internal(format!(
            "denominator of a scaling constant vanishes mod {p}"
        )));
    }
    let num = big_mod_u64(x.numer(), p);
    Ok(num * powmod(den, p - 2, p) % p)
}

/// `base^exp`, saturating at `u128::MAX` (budget comparisons only).
fn saturating_pow(base: u64, exp: u32) -> u128 {
    (base as u128).checked_pow(exp).unwrap_or(u128::MAX)
}

// ---------------------------------------------------------------------------
// Result types
// ---------------------------------------------------------------------------

/// Which counting backend produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// Full enumeration of the ambient space.
    Brute,
    /// Per-factor enumeration plus convolution over the unit group.
    Factored,
    /// Factored, with the quadratic-root shortcut on factors in general
    /// position (other factors still enumerated).
    Fast,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Brute => "brute",
            CountMethod::Factored => "factored",
            CountMethod::Fast => "fast",
        })
    }
}

impl FromStr for CountMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<CountMethod> {
        match s {
            "brute" => Ok(CountMethod::Brute),
            "factored" => Ok(CountMethod::Factored),
            "fast" => Ok(CountMethod::Fast),
            other => Err(Error::Parse(format!(
                "unknown counting method `{other}` (expected brute, factored, or fast)"
            ))),
        }
    }
}

/// An exact point count over `F_p`, tagged with the backend that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    /// The prime modulus.
    pub p: u64,
    /// The number of points.
    pub value: BigInt,
    /// The backend used.
    pub method: CountMethod,
}

/// Fiber counts of one irreducible factor, one value per scaling class.
///
/// For a factor of degree `d` over `F_p`, the function `a -> n(a) = #{z :
/// Q_j(z) = a}` on `F_p^*` is constant on cosets of the subgroup of `d`-th
/// powers, which has index `g = gcd(d, p-1)`. The table stores one
/// representative and one value per coset; `reps[c] = g0^c` for a fixed
/// generator `g0`, so the value at `g0^e` is `values[e mod g]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCountTable {
    factor: usize,
    modulus: u64,
    degree: usize,
    reps: Vec<u64>,
    values: Vec<u64>,
}

impl FiberCountTable {
    /// Index of the factor this table belongs to.
    pub fn factor(&self) -> usize {
        self.factor
    }

    /// The prime modulus.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Degree of the factor (number of its linear forms).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of scaling classes, `gcd(degree, p-1)`.
    pub fn class_count(&self) -> usize {
        self.values.len()
    }

    /// One representative per scaling class (powers of a fixed generator).
    pub fn reps(&self) -> &[u64] {
        &self.reps
    }

    /// The count on each class, aligned with [`FiberCountTable::reps`].
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// The count at the unit `g0^e`, i.e. `values[e mod class_count]`.
    pub fn value_at_exponent(&self, e: u64) -> u64 {
        self.values[(e % self.values.len() as u64) as usize]
    }

    /// Sum of `n(a)` over all `a` in `F_p^*`: the affine complement count of
    /// the factor on its own summand.
    pub fn total_over_units(&self) -> BigInt {
        let g = self.values.len() as u64;
        let mult = BigInt::from((self.modulus - 1) / g);
        let per_class: BigInt = self.values.iter().map(|&v| BigInt::from(v)).sum();
        mult * per_class
    }
}

/// The two-class count data for a product of two factors at primes where
/// both factors see exactly the square/non-square partition of `F_p^*`.
///
/// `total` is `(p-1)/2 * (n1_square*n2_square + n1_nonsquare*n2_nonsquare)`,
/// which equals the convolution formula because the square classes are
/// closed under inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClassCount {
    /// The prime modulus.
    pub p: u64,
    /// First factor's count on nonzero squares.
    pub n1_square: u64,
    /// First factor's count on non-squares.
    pub n1_nonsquare: u64,
    /// Second factor's count on nonzero squares.
    pub n2_square: u64,
    /// Second factor's count on non-squares.
    pub n2_nonsquare: u64,
    /// The resulting Milnor fiber count.
    pub total: BigInt,
}

// ---------------------------------------------------------------------------
// Bad primes
// ---------------------------------------------------------------------------

/// Primes dividing some nonzero minor of the normal matrix.
///
/// Away from this finite set, ranks of all subsets of normals — hence the
/// whole intersection lattice — are the same over `F_p` as over the
/// rationals, so point counts reflect the rational combinatorics.
pub fn bad_primes(a: &CentralArrangement) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    collect_minor_primes(&a.normal_rows(), &mut out);
    out
}

/// Inserts every prime dividing a nonzero determinant of a square submatrix
/// of `rows` into `out`. Determinants are taken in `i128` when the entries
/// permit, falling back to arbitrary precision on overflow.
fn collect_minor_primes(rows: &[Vec<BigInt>], out: &mut BTreeSet<u64>) {
    let nr = rows.len();
    let nc = if nr == 0 { 0 } else { rows[0].len() };
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(i128::try_from).collect::<std::result::Result<Vec<_>, _>>().ok())
        .collect();
    for k in 1..=nr.min(nc) {
        for_each_combination(nr, k, &mut |ri| {
            for_each_combination(nc, k, &mut |ci| {
                let det = match &small {
                    Some(sm) => {
                        let sub: Vec<Vec<i128>> =
                            ri.iter().map(|&i| ci.iter().map(|&j| sm[i][j]).collect()).collect();
                        match int_det_i128(&sub) {
                            Some(v) => BigInt::from(v),
                            None => big_minor(rows, ri, ci),
                        }
                    }
                    None => big_minor(rows, ri, ci),
                };
                if !det.is_zero() {
                    for q in prime_factors(&det) {
                        out.insert(q);
                    }
                }
            });
        });
    }
}

fn big_minor(rows: &[Vec<BigInt>], ri: &[usize], ci: &[usize]) -> BigInt {
    let sub: Vec<Vec<BigInt>> = ri
        .iter()
        .map(|&i| ci.iter().map(|&j| rows[i][j].clone()).collect())
        .collect();
    int_det(&sub)
}

/// Calls `f` on every k-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == 0 || k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// ---------------------------------------------------------------------------
// The counter
// ---------------------------------------------------------------------------

/// Per-factor data for the factored and fast methods.
#[derive(Debug, Clone)]
struct FactorData {
    /// The factor's linear forms written on an integer basis of its direct
    /// summand: row `i` is `u_i . B` for the original normal `u_i`. Using the
    /// original normals keeps the identity `Q(Bz) = prod_j Q_j(z_j)` exact —
    /// no per-hyperplane rescaling sneaks in.
    forms: Vec<Vec<BigInt>>,
    /// Dimension of the summand.
    rank: usize,
    /// Quadratic shortcut data, when the forms are in general position with
    /// `degree == rank + 1`.
    fast: Option<FastData>,
}

#[derive(Debug, Clone)]
struct FastData {
    /// With `W` the first `rank` forms and `c` the coordinates of the last
    /// form over them, `gamma = prod c_i`; then `n(a)` equals the count for
    /// the standard product-times-sum equation at `gamma * a`.
    gamma: BigRational,
}

/// Exact point counter for one arrangement: complements and Milnor fibers
/// over prime fields, by brute force or through the irreducible
/// decomposition.
///
/// Construction precomputes the decomposition, a direct-sum basis adapted to
/// it, and the set of bad primes (for the normal matrix and for the
/// auxiliary matrices of the factored method). Requires an essential
/// arrangement; essentialize first otherwise.
#[derive(Debug, Clone)]
pub struct PointCounter {
    arrangement: CentralArrangement,
    decomposition: Decomposition,
    factors: Vec<FactorData>,
    bad: BTreeSet<u64>,
    budget: u64,
    threads: usize,
}

impl PointCounter {
    /// Prepares a counter with the default budget, single-threaded.
    pub fn new(arrangement: &CentralArrangement) -> Result<PointCounter> {
        let decomposition = irreducible_decomposition(arrangement)?;
        let dim = arrangement.ambient_dim();
        let rows = arrangement.normal_rows();

        let mut factors = Vec::with_capacity(decomposition.block_count());
        let mut stacked: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
        for (j, block) in decomposition.blocks().iter().enumerate() {
            let in_block: BTreeSet<usize> = block.iter().copied().collect();
            let others: Vec<Vec<BigRational>> = (0..rows.len())
                .filter(|i| !in_block.contains(i))
                .map(|i| rows[i].iter().map(|x| BigRational::from_integer(x.clone())).collect())
                .collect();
            // Integer basis of the direct summand carrying this factor: the
            // common kernel of all other factors' normals.
            let basis: Vec<Vec<BigInt>> = if others.is_empty() {
                (0..dim)
                    .map(|k| {
                        (0..dim).map(|l| BigInt::from(u64::from(k == l))).collect()
                    })
                    .collect()
            } else {
                QMat::new(others, dim)
                    .kernel_basis()
                    .iter()
                    .map(|v| primitive_integer_vector(v))
                    .collect()
            };
            let rank = basis.len();
            if rank != decomposition.factors()[j].ambient_dim() {
                return Err(Error::Internal(format!(
                    "summand {j} has dimension {rank}, factor has rank {}",
                    decomposition.factors()[j].ambient_dim()
                )));
            }
            let forms: Vec<Vec<BigInt>> = block
                .iter()
                .map(|&i| basis.iter().map(|b| dot(&rows[i], b)).collect())
                .collect();
            if int_rank(&forms, rank) != rank {
                return Err(Error::Internal(format!(
                    "factor {j} forms do not span its summand"
                )));
            }
            let fast = fast_data(&forms, rank)?;
            stacked.extend(basis);
            factors.push(FactorData { forms, rank, fast });
        }
        if stacked.len() != dim {
            return Err(Error::Internal(
                "summand dimensions do not add up to the ambient dimension".into(),
            ));
        }
        let basis_det = int_det(&stacked);
        if basis_det.is_zero() {
            return Err(Error::Internal("direct-sum basis is singular".into()));
        }

        let mut bad = bad_primes(arrangement);
        for q in prime_factors(&basis_det) {
            bad.insert(q);
        }
        for fd in &factors {
            collect_minor_primes(&fd.forms, &mut bad);
        }

        Ok(PointCounter {
            arrangement: arrangement.clone(),
            decomposition,
            factors,
            bad,
            budget: DEFAULT_BUDGET,
            threads: 1,
        })
    }

    /// Replaces the evaluation budget (number of field evaluations allowed
    /// per counting call).
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.set_budget(budget);
        self
    }

    /// Sets the number of worker threads for the enumeration kernels. Counts
    /// are identical for any thread count; only wall time changes.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.set_threads(threads);
        self
    }

    /// In-place form of [`with_budget`](Self::with_budget).
    pub fn set_budget(&mut self, budget: u64) {
        self.budget = budget;
    }

    /// In-place form of [`with_threads`](Self::with_threads).
    pub fn set_threads(&mut self, threads: usize) {
        self.threads = threads.max(1);
    }

    /// The arrangement being counted.
    pub fn arrangement(&self) -> &CentralArrangement {
        &self.arrangement
    }

    /// Its irreducible decomposition.
    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    /// Primes with bad reduction: divisors of minors of the normal matrix,
    /// of the direct-sum basis determinant, or of the per-factor form
    /// matrices. A superset of [`bad_primes`] of the arrangement.
    pub fn bad_primes(&self) -> &BTreeSet<u64> {
        &self.bad
    }

    /// Whether `p` is a prime with good reduction.
    pub fn is_good_prime(&self, p: u64) -> bool {
        is_prime(p) && !self.bad.contains(&p)
    }

    fn ensure_good(&self, p: u64) -> Result<()> {
        if self.bad.contains(&p) {
            return Err(Error::BadPrime(p));
        }
        Ok(())
    }

    fn ensure_budget(&self, needed: u128) -> Result<()> {
        if needed > self.budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget: self.budget });
        }
        Ok(())
    }

    /// Field evaluations needed to build factor `j`'s table at `p`.
    fn factor_cost(&self, j: usize, p: u64, allow_fast: bool) -> u128 {
        let fd = &self.factors[j];
        let degree = fd.forms.len();
        if degree == 1 {
            return 1;
        }
        if allow_fast && fd.fast.is_some() && p > 2 {
            let g = (degree as u64).gcd(&(p - 1));
            (g as u128).saturating_mul(saturating_pow(p - 1, (fd.rank - 1) as u32))
        } else {
            saturating_pow(p, fd.rank as u32)
        }
    }

    /// Counts the points of the affine complement `Q != 0` in `F_p^(n+1)` by
    /// direct enumeration. At good primes this equals the characteristic
    /// polynomial evaluated at `p`.
    pub fn count_affine_complement(&self, field: &PrimeField) -> Result<CountResult> {
        let p = field.p();
        self.ensure_good(p)?;
        let dim = self.arrangement.ambient_dim();
        self.ensure_budget(saturating_pow(p, dim as u32))?;
        let forms = reduce_rows_mod_p(&self.arrangement.normal_rows(), p);
        let counts = product_histogram(p, &forms, dim, self.threads);
        let value: BigInt = counts[1..].iter().map(|&c| BigInt::from(c)).sum();
        Ok(CountResult { p, value, method: CountMethod::Brute })
    }

    /// Counts the Milnor fiber `Q = 1` in `F_p^(n+1)` by direct enumeration.
    ///
    /// No good-prime requirement: this is the honest count of the reduced
    /// equation, whatever the prime.
    pub fn count_milnor_fiber_bruteforce(&self, field: &PrimeField) -> Result<CountResult> {
        let p = field.p();
        let dim = self.arrangement.ambient_dim();
        self.ensure_budget(saturating_pow(p, dim as u32))?;
        let forms = reduce_rows_mod_p(&self.arrangement.normal_rows(), p);
        let counts = product_histogram(p, &forms, dim, self.threads);
        Ok(CountResult { p, value: BigInt::from(counts[1]), method: CountMethod::Brute })
    }

    /// Counts the Milnor fiber through the irreducible decomposition, with
    /// every factor table built by enumeration.
    pub fn count_milnor_fiber_factored(&self, field: &PrimeField) -> Result<CountResult> {
        let value = self.count_convolved(field, false)?;
        Ok(CountResult { p: field.p(), value, method: CountMethod::Factored })
    }

    /// Counts the Milnor fiber through the irreducible decomposition, using
    /// the quadratic shortcut on factors that admit it.
    pub fn count_milnor_fiber_fast(&self, field: &PrimeField) -> Result<CountResult> {
        let value = self.count_convolved(field, true)?;
        Ok(CountResult { p: field.p(), value, method: CountMethod::Fast })
    }

    /// Counts the Milnor fiber with the requested backend.
    pub fn count_milnor_fiber(&self, field: &PrimeField, method: CountMethod) -> Result<CountResult> {
        match method {
            CountMethod::Brute => self.count_milnor_fiber_bruteforce(field),
            CountMethod::Factored => self.count_milnor_fiber_factored(field),
            CountMethod::Fast => self.count_milnor_fiber_fast(field),
        }
    }

    fn count_convolved(&self, field: &PrimeField, allow_fast: bool) -> Result<BigInt> {
        let p = field.p();
        self.ensure_good(p)?;
        let total: u128 = (0..self.factors.len())
            .map(|j| self.factor_cost(j, p, allow_fast))
            .fold(0u128, u128::saturating_add);
        self.ensure_budget(total)?;
        let tables: Vec<FiberCountTable> = (0..self.factors.len())
            .map(|j| self.factor_table(field, j, allow_fast))
            .collect::<Result<_>>()?;
        Ok(convolve_at_identity(p, &tables))
    }

    /// The scaling-class count table of factor `j` at `p`, using the
    /// quadratic shortcut when the factor admits it and enumeration
    /// otherwise.
    pub fn factor_fiber_counts(&self, field: &PrimeField, factor: usize) -> Result<FiberCountTable> {
        assert!(factor < self.factors.len(), "factor index out of range");
        self.factor_table(field, factor, true)
    }

    fn factor_table(&self, field: &PrimeField, j: usize, allow_fast: bool) -> Result<FiberCountTable> {
        let p = field.p();
        self.ensure_good(p)?;
        self.ensure_budget(self.factor_cost(j, p, allow_fast))?;
        let fd = &self.factors[j];
        let degree = fd.forms.len();
        if degree == 1 {
            // One linear form on a line: each nonzero target has exactly one
            // preimage, and all units form a single scaling class.
            return Ok(FiberCountTable {
                factor: j,
                modulus: p,
                degree,
                reps: vec![1],
                values: vec![1],
            });
        }
        let g = (degree as u64).gcd(&(p - 1));
        let root = primitive_root(p);
        let reps: Vec<u64> = (0..g).map(|c| powmod(root, c, p)).collect();

        let values = if allow_fast && fd.fast.is_some() && p > 2 {
            let gamma = rat_mod_u64(&fd.fast.as_ref().expect("checked").gamma, p)?;
            if gamma == 0 {
                return Err(Error::Internal(format!(
                    "scaling constant vanishes mod {p} at a good prime"
                )));
            }
            let targets: Vec<u64> = reps.iter().map(|&rep| gamma * rep % p).collect();
            standard_generic_counts(field, fd.rank, &targets, self.threads)?
        } else {
            let forms = reduce_rows_mod_p(&fd.forms, p);
            let counts = product_histogram(p, &forms, fd.rank, self.threads);
            let values: Vec<u64> = reps.iter().map(|&rep| counts[rep as usize]).collect();
            // Scaling invariance: the histogram must be constant on every
            // coset of the subgroup of degree-th powers.
            let mut a = 1u64;
            for e in 0..p - 1 {
                if counts[a as usize] != values[(e % g) as usize] {
                    return Err(Error::Internal(format!(
                        "factor {j} count is not constant on scaling classes mod {p}"
                    )));
                }
                a = a * root % p;
            }
            values
        };
        Ok(FiberCountTable { factor: j, modulus: p, degree, reps, values })
    }

    /// For a product of exactly two factors at a prime where each factor's
    /// scaling classes are precisely squares and non-squares (two classes
    /// apiece), returns the four class counts and the fiber count assembled
    /// from them. Restricted to `p = 11 mod 12`, the residue class in which
    /// this happens for degrees 4 and 6.
    ///
    /// The result is cross-checked against the convolution formula.
    pub fn square_class_count(&self, field: &PrimeField) -> Result<SquareClassCount> {
        let p = field.p();
        if p % 12 != 11 {
            return Err(Error::WrongResidueClass { p, want: 11, modulus: 12 });
        }
        if self.factors.len() != 2 {
            return Err(Error::WrongFactorCount { want: 2, got: self.factors.len() });
        }
        let t1 = self.factor_table(field, 0, true)?;
        let t2 = self.factor_table(field, 1, true)?;
        for t in [&t1, &t2] {
            if t.class_count() != 2 {
                return Err(Error::SquareClassUnavailable {
                    factor: t.factor(),
                    classes: t.class_count(),
                });
            }
        }
        // With two classes, the class of 1 is the nonzero squares and the
        // other class the non-squares. Squares are closed under inversion,
        // so pairing a % squares with its inverse stays within the class and
        // the convolution collapses to two diagonal products.
        let half = BigInt::from((p - 1) / 2);
        let total = &half
            * (BigInt::from(t1.values[0]) * BigInt::from(t2.values[0])
                + BigInt::from(t1.values[1]) * BigInt::from(t2.values[1]));
        let convolved = convolve_at_identity(p, &[t1.clone(), t2.clone()]);
        if total != convolved {
            return Err(Error::Internal(format!(
                "square-class product {total} disagrees with convolution {convolved} at p={p}"
            )));
        }
        Ok(SquareClassCount {
            p,
            n1_square: t1.values[0],
            n1_nonsquare: t1.values[1],
            n2_square: t2.values[0],
            n2_nonsquare: t2.values[1],
            total,
        })
    }
}

fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Detects the quadratic shortcut: `degree == rank + 1` with every maximal
/// square submatrix of the forms invertible, and computes its scaling
/// constant.
fn fast_data(forms: &[Vec<BigInt>], rank: usize) -> Result<Option<FastData>> {
    if rank == 0 || forms.len() != rank + 1 {
        return Ok(None);
    }
    for skip in 0..forms.len() {
        let sub: Vec<Vec<BigInt>> = forms
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, r)| r.clone())
            .collect();
        if int_det(&sub).is_zero() {
            return Ok(None);
        }
    }
    // Coordinates of the last form over the first `rank`: solve W^T c = w.
    let wt: Vec<Vec<BigRational>> = (0..rank)
        .map(|col| (0..rank).map(|row| BigRational::from_integer(forms[row][col].clone())).collect())
        .collect();
    let rhs: Vec<BigRational> = forms[rank]
        .iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect();
    let c = QMat::new(wt, rank)
        .solve(&rhs)
        .ok_or_else(|| Error::Internal("general-position forms failed to solve".into()))?;
    if c.iter().any(|x| x.is_zero()) {
        return Err(Error::Internal(
            "vanishing coordinate contradicts general position".into(),
        ));
    }
    let gamma = c.iter().fold(BigRational::one(), |acc, x| acc * x);
    Ok(Some(FastData { gamma }))
}

fn reduce_rows_mod_p(rows: &[Vec<BigInt>], p: u64) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|r| r.iter().map(|x| big_mod_u64(x, p)).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Enumeration kernels
// ---------------------------------------------------------------------------

/// Splits `lo..hi` into at most `parts` contiguous, nonempty chunks.
fn split_range(lo: u64, hi: u64, parts: usize) -> Vec<(u64, u64)> {
    let len = hi - lo;
    let parts = (parts as u64).clamp(1, len.max(1));
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = lo;
    for i in 0..parts {
        let size = base + u64::from(i < extra);
        if size == 0 {
            break;
        }
        out.push((start, start + size));
        start += size;
    }
    out
}

/// Histogram of `prod_i (f_i . z)` over all `z` in `F_p^r` with the first
/// coordinate restricted to `lo..hi`: returns `counts[a]` for `a` in `0..p`.
fn histogram_range(p: u64, forms: &[Vec<u64>], r: usize, lo: u64, hi: u64) -> Vec<u64> {
    let d = forms.len();
    let mut counts = vec![0u64; p as usize];
    if r == 1 {
        for z0 in lo..hi {
            let mut prod = 1u64;
            for f in forms {
                prod = prod * (f[0] * z0 % p) % p;
            }
            counts[prod as usize] += 1;
        }
        return counts;
    }
    // dots[l][i] = f_i . (z_0..z_{l-1}); the innermost coordinate advances
    // each form's value by its last coefficient, everything else is odometer
    // bookkeeping on the middle coordinates.
    let step: Vec<u64> = forms.iter().map(|f| f[r - 1]).collect();
    let mut z = vec![0u64; r];
    let mut dots = vec![vec![0u64; d]; r];
    let mut cur = vec![0u64; d];
    for z0 in lo..hi {
        z[0] = z0;
        for zk in z[1..].iter_mut() {
            *zk = 0;
        }
        for i in 0..d {
            dots[1][i] = forms[i][0] * z0 % p;
        }
        for l in 2..r {
            for i in 0..d {
                dots[l][i] = (dots[l - 1][i] + forms[i][l - 1] * z[l - 1]) % p;
            }
        }
        loop {
            cur.copy_from_slice(&dots[r - 1]);
            for _ in 0..p {
                let mut prod = 1u64;
                for &c in cur.iter() {
                    prod = prod * c % p;
                }
                counts[prod as usize] += 1;
                for (c, &s) in cur.iter_mut().zip(&step) {
                    *c += s;
                    if *c >= p {
                        *c -= p;
                    }
                }
            }
            let mut l = r - 1;
            let mut advanced = false;
            while l > 1 {
                l -= 1;
                if z[l] + 1 < p {
                    z[l] += 1;
                    advanced = true;
                    break;
                }
                z[l] = 0;
            }
            if !advanced {
                break;
            }
            for lv in l + 1..r {
                for i in 0..d {
                    dots[lv][i] = (dots[lv - 1][i] + forms[i][lv - 1] * z[lv - 1]) % p;
                }
            }
        }
    }
    counts
}

/// Histogram of `prod_i (f_i . z)` over all of `F_p^r`, parallelized over
/// the first coordinate. Entry `a` counts the points where the product is
/// `a`; entry `0` therefore counts the arrangement points and the rest the
/// complement, sliced by value.
fn product_histogram(p: u64, forms: &[Vec<u64>], r: usize, threads: usize) -> Vec<u64> {
    let chunks = split_range(0, p, threads);
    if chunks.len() == 1 {
        return histogram_range(p, forms, r, 0, p);
    }
    let mut total = vec![0u64; p as usize];
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|&(lo, hi)| scope.spawn(move || histogram_range(p, forms, r, lo, hi)))
            .collect();
        for h in handles {
            let part = h.join().expect("enumeration worker panicked");
            for (t, v) in total.iter_mut().zip(part) {
                *t += v;
            }
        }
    });
    total
}

/// Legendre sums for the standard equation `y_1 ... y_r (y_1 + ... + y_r) =
/// b` over the slice of `(F_p^*)^{r-1}` with first coordinate in `lo..hi`:
/// for each `b` (given as `4b mod p`), the sum of
/// `legendre((cs)^2 + 4bc)` over the slice, where `c` and `s` are the
/// product and sum of the scanned coordinates. Requires `r >= 2`.
fn generic_scan_range(field: &PrimeField, r: usize, fourb: &[u64], lo: u64, hi: u64) -> Vec<i128> {
    let p = field.p();
    let m = r - 1;
    let nb = fourb.len();
    let mut acc = vec![0i128; nb];
    if m == 1 {
        for y0 in lo..hi {
            let u = y0 * y0 % p; // c = y0, s = y0
            let uu = u * u % p;
            for (a, &fb) in acc.iter_mut().zip(fourb) {
                *a += i128::from(field.sym((uu + fb * y0 % p) % p));
            }
        }
        return acc;
    }
    let mut y = vec![1u64; m];
    let mut prods = vec![1u64; m];
    let mut sums = vec![0u64; m];
    for y0 in lo..hi {
        y[0] = y0;
        for yk in y[1..].iter_mut() {
            *yk = 1;
        }
        for l in 1..m {
            prods[l] = prods[l - 1] * y[l - 1] % p;
            sums[l] = (sums[l - 1] + y[l - 1]) % p;
        }
        loop {
            // Innermost coordinate: c and s advance incrementally.
            let pp = prods[m - 1];
            let mut c = pp;
            let mut s = sums[m - 1] + 1;
            if s >= p {
                s -= p;
            }
            for _ in 1..p {
                let u = c * s % p;
                let uu = u * u % p;
                for (a, &fb) in acc.iter_mut().zip(fourb) {
                    *a += i128::from(field.sym((uu + fb * c % p) % p));
                }
                c += pp;
                if c >= p {
                    c -= p;
                }
                s += 1;
                if s >= p {
                    s -= p;
                }
            }
            let mut l = m - 1;
            let mut advanced = false;
            while l > 1 {
                l -= 1;
                if y[l] + 1 < p {
                    y[l] += 1;
                    advanced = true;
                    break;
                }
                y[l] = 1;
            }
            if !advanced {
                break;
            }
            for lv in l + 1..m {
                prods[lv] = prods[lv - 1] * y[lv - 1] % p;
                sums[lv] = (sums[lv - 1] + y[lv - 1]) % p;
            }
        }
    }
    acc
}

/// Counts solutions of `y_1 ... y_r (y_1 + ... + y_r) = b` in `F_p^r` for
/// each nonzero target `b`, sharing one scan of `(F_p^*)^{r-1}` across all
/// targets. Fixing all but the last coordinate leaves the quadratic
/// `c x^2 + c s x - b = 0` with `1 + legendre(c^2 s^2 + 4bc)` roots, so the
/// total is `(p-1)^(r-1)` plus a Legendre sum. Requires odd `p`.
fn standard_generic_counts(
    field: &PrimeField,
    r: usize,
    targets: &[u64],
    threads: usize,
) -> Result<Vec<u64>> {
    let p = field.p();
    let fourb: Vec<u64> = targets.iter().map(|&b| 4 * (b % p) % p).collect();
    let sums: Vec<i128> = if r == 1 {
        fourb.iter().map(|&fb| i128::from(field.sym(fb))).collect()
    } else {
        let chunks = split_range(1, p, threads);
        if chunks.len() == 1 {
            generic_scan_range(field, r, &fourb, 1, p)
        } else {
            let mut total = vec![0i128; fourb.len()];
            let fourb_ref = &fourb;
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunks
                    .iter()
                    .map(|&(lo, hi)| scope.spawn(move || generic_scan_range(field, r, fourb_ref, lo, hi)))
                    .collect();
                for h in handles {
                    let part = h.join().expect("scan worker panicked");
                    for (t, v) in total.iter_mut().zip(part) {
                        *t += v;
                    }
                }
            });
            total
        }
    };
    let base = saturating_pow(p - 1, (r - 1) as u32) as i128;
    sums.into_iter()
        .map(|s| {
            u64::try_from(base + s)
                .map_err(|_| Error::Internal("negative or oversized point count".into()))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Convolution over the unit group
// ---------------------------------------------------------------------------

/// Expands a class table to the full exponent-indexed function on
/// `Z/(p-1)`: entry `e` is the count at `g0^e`.
fn expanded(table: &FiberCountTable) -> Vec<BigInt> {
    let m = (table.modulus - 1) as usize;
    let g = table.values.len();
    (0..m).map(|e| BigInt::from(table.values[e % g])).collect()
}

/// Number of tuples `(a_1, ..., a_q)` of units with `prod a_j = 1`, weighted
/// by the per-factor counts: the cyclic convolution of the expanded tables
/// over `Z/(p-1)`, evaluated at exponent 0.
fn convolve_at_identity(p: u64, tables: &[FiberCountTable]) -> BigInt {
    let m = (p - 1) as usize;
    let mut acc = expanded(&tables[0]);
    for t in &tables[1..] {
        let b = expanded(t);
        let mut next = vec![BigInt::zero(); m];
        for (i, ai) in acc.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let k = (i + j) % m;
                next[k] += ai * bj;
            }
        }
        acc = next;
    }
    acc[0].clone()
}
