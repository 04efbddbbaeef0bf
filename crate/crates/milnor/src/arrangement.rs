//! Central hyperplane arrangements over ℚ: canonical representation,
//! document parsing/serialization, essentiality, and the built-in families
//! used throughout the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{primitive_integer_vector, QMat};
use crate::{Error, Result};

/// A hyperplane through the origin, stored by its canonical normal vector:
/// integer entries with GCD 1 and positive first nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<BigInt>,
}

impl Hyperplane {
    /// Canonicalize a rational normal vector. Errors on the zero vector.
    pub fn from_rational(v: &[BigRational]) -> Result<Self> {
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroNormal);
        }
        let mut normal = primitive_integer_vector(v);
        let first = normal.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            for c in &mut normal {
                *c = -&*c;
            }
        }
        Ok(Hyperplane { normal })
    }

    pub fn from_integers<I: Clone + Into<BigInt>>(v: &[I]) -> Result<Self> {
        let rat: Vec<BigRational> = v
            .iter()
            .map(|c| BigRational::from_integer(c.clone().into()))
            .collect();
        Hyperplane::from_rational(&rat)
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.normal.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A central arrangement: an ordered list of distinct hyperplanes through
/// the origin of a fixed ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralArrangement {
    name: Option<String>,
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl CentralArrangement {
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadAmbientDimension);
        }
        if hyperplanes.is_empty() {
            return Err(Error::EmptyArrangement);
        }
        if hyperplanes.iter().any(|h| h.dim() != dim) {
            return Err(Error::RaggedRows);
        }
        let mut seen = std::collections::BTreeSet::new();
        for h in &hyperplanes {
            if !seen.insert(h.normal.clone()) {
                return Err(Error::DuplicateHyperplane);
            }
        }
        Ok(CentralArrangement {
            name: None,
            dim,
            hyperplanes,
        })
    }

    pub fn from_rational_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyArrangement);
        }
        let dim = rows[0].len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::RaggedRows);
        }
        let hyperplanes = rows
            .iter()
            .map(|r| Hyperplane::from_rational(r))
            .collect::<Result<Vec<_>>>()?;
        CentralArrangement::new(dim, hyperplanes)
    }

    pub fn from_integer_rows<I: Clone + Into<BigInt>>(rows: &[Vec<I>]) -> Result<Self> {
        let rat = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| BigRational::from_integer(c.clone().into()))
                    .collect()
            })
            .collect();
        CentralArrangement::from_rational_rows(rat)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Ambient dimension (the space the hyperplanes live in).
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Number of hyperplanes, i.e. the degree of the defining product.
    pub fn degree(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn normal_rows(&self) -> Vec<Vec<BigInt>> {
        self.hyperplanes.iter().map(|h| h.normal.clone()).collect()
    }

    pub fn normal_matrix(&self) -> QMat {
        QMat::from_int_rows(&self.normal_rows(), self.dim)
    }

    /// Rank of the normal-vector matrix.
    pub fn rank(&self) -> usize {
        self.normal_matrix().rank()
    }

    /// True iff the common intersection of all hyperplanes is the origin.
    pub fn is_essential(&self) -> bool {
        self.rank() == self.dim
    }

    /// Restrict to an exact coordinate system for the span of the normals.
    ///
    /// Projects every normal onto the pivot columns of the row-reduced
    /// normal matrix. The projection is injective on the row span, so all
    /// linear dependencies among normals (hence the whole intersection
    /// lattice) are preserved, and the result is essential in ambient
    /// dimension = rank. Essential input comes back unchanged.
    pub fn essentialize(&self) -> CentralArrangement {
        let (_, pivots) = self.normal_matrix().rref();
        if pivots.len() == self.dim {
            return self.clone();
        }
        let hyperplanes = self
            .hyperplanes
            .iter()
            .map(|h| {
                let restricted: Vec<BigInt> =
                    pivots.iter().map(|&j| h.normal[j].clone()).collect();
                Hyperplane::from_integers(&restricted)
                    .expect("projection of a normal onto pivot columns is nonzero")
            })
            .collect();
        CentralArrangement {
            name: self.name.clone(),
            dim: pivots.len(),
            hyperplanes,
        }
    }

    /// Sub-arrangement picked out by hyperplane indices, in the same
    /// ambient space.
    pub fn restriction(&self, indices: &[usize]) -> Result<CentralArrangement> {
        let hyperplanes = indices
            .iter()
            .map(|&i| self.hyperplanes[i].clone())
            .collect();
        CentralArrangement::new(self.dim, hyperplanes)
    }

    /// Direct sum: hyperplanes of `self` extended by zeros, then those of
    /// `other`, in ambient dimension dim(self) + dim(other).
    pub fn product(&self, other: &CentralArrangement) -> CentralArrangement {
        let dim = self.dim + other.dim;
        let mut hyperplanes = Vec::with_capacity(self.degree() + other.degree());
        for h in &self.hyperplanes {
            let mut v = h.normal.clone();
            v.resize(dim, BigInt::zero());
            hyperplanes.push(Hyperplane { normal: v });
        }
        for h in &other.hyperplanes {
            let mut v = vec![BigInt::zero(); self.dim];
            v.extend(h.normal.iter().cloned());
            hyperplanes.push(Hyperplane { normal: v });
        }
        CentralArrangement {
            name: None,
            dim,
            hyperplanes,
        }
    }

    /// Parse the structured document format: keys `name` (optional) and
    /// `hyperplanes` (list of equal-length lists of integer or `a/b`
    /// strings).
    pub fn parse_document(text: &str) -> Result<CentralArrangement> {
        let doc: Document =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.hyperplanes.is_empty() {
            return Err(Error::EmptyArrangement);
        }
        let dim = doc.hyperplanes[0].len();
        if doc.hyperplanes.iter().any(|r| r.len() != dim) {
            return Err(Error::RaggedRows);
        }
        let rows = doc
            .hyperplanes
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        BigRational::from_str(s.trim())
                            .map_err(|e| Error::Parse(format!("bad coefficient {s:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let arr = CentralArrangement::from_rational_rows(rows)?;
        Ok(match doc.name {
            Some(name) => arr.with_name(name),
            None => arr,
        })
    }

    /// Serialize in the document format with canonicalized integer entries.
    pub fn to_document(&self) -> String {
        let doc = Document {
            name: self.name.clone(),
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| h.normal.iter().map(|c| c.to_string()).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct Document {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    hyperplanes: Vec<Vec<String>>,
}

/// The Boolean arrangement of the n coordinate hyperplanes of ℂⁿ.
pub fn boolean(n: usize) -> Result<CentralArrangement> {
    if n == 0 {
        return Err(Error::BadAmbientDimension);
    }
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    Ok(CentralArrangement::from_integer_rows(&rows)?.with_name(format!("boolean:{n}")))
}

/// The generic-type arrangement of n+2 hyperplanes in ℂ^{n+1}: the n+1
/// coordinate hyperplanes together with the kernel of the coordinate sum.
pub fn generic(n: usize) -> Result<CentralArrangement> {
    let dim = n + 1;
    let mut rows: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    rows.push(vec![1; dim]);
    Ok(CentralArrangement::from_integer_rows(&rows)?.with_name(format!("g{n}")))
}

/// Direct sum of u generic-type factors in ℂ³ and v in ℂ⁵, giving
/// 4u + 6v hyperplanes in ℂ^{3u+5v}.
pub fn a_family(u: usize, v: usize) -> Result<CentralArrangement> {
    if u + v == 0 {
        return Err(Error::EmptyArrangement);
    }
    let mut acc: Option<CentralArrangement> = None;
    for _ in 0..u {
        let g = generic(2)?;
        acc = Some(match acc {
            Some(a) => a.product(&g),
            None => g,
        });
    }
    for _ in 0..v {
        let g = generic(4)?;
        acc = Some(match acc {
            Some(a) => a.product(&g),
            None => g,
        });
    }
    Ok(acc.unwrap().with_name(format!("a{u}{v}")))
}

/// Looks up a named built-in arrangement.
///
/// Recognized spellings: the shortcuts `g2`, `g4`, `a11`, and the
/// parameterized forms `boolean:N`, `g:N`, `a:U,V`.
pub fn builtin(name: &str) -> Result<CentralArrangement> {
    if let Some(rest) = name.strip_prefix("boolean:") {
        return boolean(parse_count(rest, "boolean:N")?);
    }
    if let Some(rest) = name.strip_prefix("g:") {
        return generic(parse_count(rest, "g:N")?);
    }
    if let Some(rest) = name.strip_prefix("a:") {
        let (u, v) = rest
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("a takes two counts, e.g. a:1,1; got a:{rest}")))?;
        return a_family(parse_count(u, "a:U,V")?, parse_count(v, "a:U,V")?);
    }
    match name {
        "g2" => generic(2),
        "g4" => generic(4),
        "a11" => a_family(1, 1),
        _ => Err(Error::Parse(format!("unknown built-in arrangement @{name}"))),
    }
}

fn parse_count(text: &str, what: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: expected an integer, got {text:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization_clears_denominators_and_signs() {
        let half_third: Vec<BigRational> = vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(3)),
        ];
        let h = Hyperplane::from_rational(&half_third).unwrap();
        assert_eq!(h.normal(), &[BigInt::from(3), BigInt::from(2)]);

        let neg = Hyperplane::from_integers(&[0i64, -2, 4]).unwrap();
        assert_eq!(
            neg.normal(),
            &[BigInt::from(0), BigInt::from(1), BigInt::from(-2)]
        );

        assert!(matches!(
            Hyperplane::from_integers(&[0i64, 0]),
            Err(Error::ZeroNormal)
        ));
    }

    #[test]
    fn parse_canonicalizes_and_rejects_bad_documents() {
        let g2 = CentralArrangement::parse_document(
            r#"{"hyperplanes": [["1","0","0"],["0","1","0"],["0","0","1"],["1","1","1"]]}"#,
        )
        .unwrap();
        assert_eq!(g2.degree(), 4);
        assert_eq!(g2.ambient_dim(), 3);

        let dup = CentralArrangement::parse_document(r#"{"hyperplanes": [["1","0"],["2","0"]]}"#);
        assert!(matches!(dup, Err(Error::DuplicateHyperplane)));

        let frac =
            CentralArrangement::parse_document(r#"{"hyperplanes": [["1/2","1/3"]]}"#).unwrap();
        assert_eq!(
            frac.hyperplanes()[0].normal(),
            &[BigInt::from(3), BigInt::from(2)]
        );

        let ragged =
            CentralArrangement::parse_document(r#"{"hyperplanes": [["1","0"],["1"]]}"#);
        assert!(matches!(ragged, Err(Error::RaggedRows)));

        let empty = CentralArrangement::parse_document(r#"{"hyperplanes": []}"#);
        assert!(matches!(empty, Err(Error::EmptyArrangement)));
    }

    #[test]
    fn serialization_round_trips_canonical_form() {
        let a = CentralArrangement::parse_document(
            r#"{"name":"demo","hyperplanes": [["1/2","-1/2"],["0","5"]]}"#,
        )
        .unwrap();
        let text = a.to_document();
        let b = CentralArrangement::parse_document(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.name(), Some("demo"));
        assert_eq!(b.hyperplanes()[0].normal(), &[BigInt::from(1), BigInt::from(-1)]);
        assert_eq!(b.hyperplanes()[1].normal(), &[BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn essentiality_and_essentialization() {
        let g2 = generic(2).unwrap();
        assert!(g2.is_essential());
        assert_eq!(g2.essentialize(), g2);

        // {x, y} inside a 3-dimensional space: rank 2 < 3.
        let xy = CentralArrangement::from_integer_rows(&[vec![1i64, 0, 0], vec![0, 1, 0]])
            .unwrap();
        assert!(!xy.is_essential());
        let ess = xy.essentialize();
        assert_eq!(ess.ambient_dim(), 2);
        assert!(ess.is_essential());
        assert_eq!(
            ess.normal_rows(),
            vec![
                vec![BigInt::from(1), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(1)]
            ]
        );

        // {x+z, y+z}: still two independent normals after restriction.
        let slanted =
            CentralArrangement::from_integer_rows(&[vec![1i64, 0, 1], vec![0, 1, 1]]).unwrap();
        let ess = slanted.essentialize();
        assert_eq!(ess.ambient_dim(), 2);
        assert_eq!(ess.rank(), 2);
    }

    #[test]
    fn essentialize_preserves_dependence_relations() {
        // x, y, x+y, plus an inert coordinate: the circuit {0,1,2} must
        // survive the projection.
        let a = CentralArrangement::from_integer_rows(&[
            vec![1i64, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
        ])
        .unwrap();
        let ess = a.essentialize();
        assert_eq!(ess.ambient_dim(), 2);
        let rows = ess.normal_rows();
        let sum: Vec<BigInt> = (0..2).map(|j| &rows[0][j] + &rows[1][j]).collect();
        assert_eq!(sum, rows[2]);
    }

    #[test]
    fn builtin_families_have_documented_shapes() {
        let b3 = boolean(3).unwrap();
        assert_eq!((b3.degree(), b3.ambient_dim()), (3, 3));
        assert!(b3.is_essential());

        let g2 = generic(2).unwrap();
        assert_eq!((g2.degree(), g2.ambient_dim()), (4, 3));

        let g4 = generic(4).unwrap();
        assert_eq!((g4.degree(), g4.ambient_dim()), (6, 5));

        let a11 = a_family(1, 1).unwrap();
        assert_eq!((a11.degree(), a11.ambient_dim()), (10, 8));
        assert!(a11.is_essential());
        assert_eq!(a11, g2.product(&g4).with_name("a11"));

        let a21 = a_family(2, 1).unwrap();
        assert_eq!((a21.degree(), a21.ambient_dim()), (14, 11));
        let a12 = a_family(1, 2).unwrap();
        assert_eq!((a12.degree(), a12.ambient_dim()), (16, 13));
    }

    #[test]
    fn product_is_a_direct_sum_on_normals() {
        let b2 = boolean(2).unwrap();
        let p = b2.product(&b2);
        assert_eq!(p.ambient_dim(), 4);
        assert_eq!(p.degree(), 4);
        assert!(p.is_essential());
        assert_eq!(
            p.normal_rows()[2],
            vec![
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(1),
                BigInt::from(0)
            ]
        );
    }
}
