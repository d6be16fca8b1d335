use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::DenseMatrix;
use crate::analytic::Mode;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeTag {
    Single,
    Bipartite,
}

impl ModeTag {
    pub fn dim(self, cutoff: usize) -> usize {
        match self {
            ModeTag::Single => cutoff,
            ModeTag::Bipartite => cutoff * cutoff,
        }
    }
}

/// State vector in a truncated number basis. Bipartite amplitudes are indexed
/// `m * cutoff + n` for `|m>_a (x) |n>_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    cutoff: usize,
    tag: ModeTag,
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn new(cutoff: usize, tag: ModeTag, amplitudes: Vec<Complex64>) -> Result<Self> {
        let expected = tag.dim(cutoff);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: expected,
            });
        }
        Ok(Self {
            cutoff,
            tag,
            amplitudes,
        })
    }

    pub fn vacuum(cutoff: usize, tag: ModeTag) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); tag.dim(cutoff)];
        amplitudes[0] = ONE;
        Self {
            cutoff,
            tag,
            amplitudes,
        }
    }

    /// `|a> (x) |b>` for two single-mode vectors of equal cutoff.
    pub fn product(a: &FockVector, b: &FockVector) -> Result<Self> {
        if a.tag != ModeTag::Single || b.tag != ModeTag::Single || a.cutoff != b.cutoff {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: b.dim(),
            });
        }
        let amplitudes = a
            .amplitudes
            .iter()
            .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
            .collect();
        Ok(Self {
            cutoff: a.cutoff,
            tag: ModeTag::Bipartite,
            amplitudes,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn mode_tag(&self) -> ModeTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a.norm_sqr()).sum())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        self.check_same_space(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            cutoff: self.cutoff,
            tag: self.tag,
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &FockVector) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            cutoff: self.cutoff,
            tag: self.tag,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn check_same_space(&self, other: &FockVector) -> Result<()> {
        if self.tag != other.tag || self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

/// `coeff * (a (x) b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KronTerm {
    pub coeff: Complex64,
    pub a: DenseMatrix,
    pub b: DenseMatrix,
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Single(DenseMatrix),
    Bipartite(Vec<KronTerm>),
}

/// Operator on one mode (a dense matrix) or on both modes.
///
/// Two-mode operators are held as a sum of Kronecker products of dense
/// single-mode factors. Every operator appearing in the construction is of
/// this form with one or two terms, and the explicit `cutoff^2`-dimensional
/// matrix is only materialized on request through [`FockOperator::to_dense`].
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    cutoff: usize,
    repr: Repr,
}

impl FockOperator {
    pub fn single(matrix: DenseMatrix) -> Self {
        Self {
            cutoff: matrix.dim(),
            repr: Repr::Single(matrix),
        }
    }

    pub fn bipartite(cutoff: usize, terms: Vec<KronTerm>) -> Result<Self> {
        for t in &terms {
            for d in [t.a.dim(), t.b.dim()] {
                if d != cutoff {
                    return Err(Error::DimensionMismatch {
                        left: d,
                        right: cutoff,
                    });
                }
            }
        }
        Ok(Self {
            cutoff,
            repr: Repr::Bipartite(terms),
        })
    }

    /// `matrix` on `mode`, identity on the other mode.
    pub fn on_mode(matrix: DenseMatrix, mode: Mode) -> Self {
        let cutoff = matrix.dim();
        let id = DenseMatrix::identity(cutoff);
        let (a, b) = match mode {
            Mode::A => (matrix, id),
            Mode::B => (id, matrix),
        };
        Self {
            cutoff,
            repr: Repr::Bipartite(vec![KronTerm { coeff: ONE, a, b }]),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn mode_tag(&self) -> ModeTag {
        match self.repr {
            Repr::Single(_) => ModeTag::Single,
            Repr::Bipartite(_) => ModeTag::Bipartite,
        }
    }

    pub fn dim(&self) -> usize {
        self.mode_tag().dim(self.cutoff)
    }

    pub fn as_single(&self) -> Option<&DenseMatrix> {
        match &self.repr {
            Repr::Single(m) => Some(m),
            Repr::Bipartite(_) => None,
        }
    }

    pub fn terms(&self) -> &[KronTerm] {
        match &self.repr {
            Repr::Single(_) => &[],
            Repr::Bipartite(t) => t,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match &self.repr {
            Repr::Single(m) => m.clone(),
            Repr::Bipartite(terms) => {
                let mut out = DenseMatrix::zeros(self.dim());
                for t in terms {
                    out = out.add(&t.a.kron(&t.b).scale(t.coeff));
                }
                out
            }
        }
    }

    fn check_compatible(&self, rhs: &Self) -> Result<()> {
        if self.cutoff != rhs.cutoff || self.mode_tag() != rhs.mode_tag() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Single(a), Repr::Single(b)) => Repr::Single(a.matmul(b)),
            (Repr::Bipartite(l), Repr::Bipartite(r)) => {
                let mut terms = Vec::with_capacity(l.len() * r.len());
                for x in l {
                    for y in r {
                        terms.push(KronTerm {
                            coeff: x.coeff * y.coeff,
                            a: x.a.matmul(&y.a),
                            b: x.b.matmul(&y.b),
                        });
                    }
                }
                Repr::Bipartite(terms)
            }
            _ => unreachable!("tags checked"),
        };
        Ok(Self {
            cutoff: self.cutoff,
            repr,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Single(a), Repr::Single(b)) => Repr::Single(a.sub(b)),
            (Repr::Bipartite(l), Repr::Bipartite(r)) => {
                let mut terms = l.clone();
                terms.extend(r.iter().map(|t| KronTerm {
                    coeff: -t.coeff,
                    a: t.a.clone(),
                    b: t.b.clone(),
                }));
                Repr::Bipartite(terms)
            }
            _ => unreachable!("tags checked"),
        };
        Ok(Self {
            cutoff: self.cutoff,
            repr,
        })
    }

    pub fn adjoint(&self) -> Self {
        let repr = match &self.repr {
            Repr::Single(m) => Repr::Single(m.adjoint()),
            Repr::Bipartite(terms) => Repr::Bipartite(
                terms
                    .iter()
                    .map(|t| KronTerm {
                        coeff: t.coeff.conj(),
                        a: t.a.adjoint(),
                        b: t.b.adjoint(),
                    })
                    .collect(),
            ),
        };
        Self {
            cutoff: self.cutoff,
            repr,
        }
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.cutoff != self.cutoff || v.tag != self.mode_tag() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.dim(),
            });
        }
        let amplitudes = match &self.repr {
            Repr::Single(m) => m.apply(&v.amplitudes),
            Repr::Bipartite(terms) => {
                let n = self.cutoff;
                let mut out = vec![Complex64::new(0.0, 0.0); n * n];
                for t in terms {
                    // (a (x) b) vec(Psi) = vec(a Psi b^T)
                    let mut psi_bt = vec![Complex64::new(0.0, 0.0); n * n];
                    for i in 0..n {
                        let psi_row = &v.amplitudes[i * n..(i + 1) * n];
                        for k in 0..n {
                            psi_bt[i * n + k] =
                                t.b.row(k).iter().zip(psi_row).map(|(b, p)| b * p).sum();
                        }
                    }
                    for i in 0..n {
                        for (j, &aij) in t.a.row(i).iter().enumerate() {
                            if aij == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            let c = t.coeff * aij;
                            for k in 0..n {
                                out[i * n + k] += c * psi_bt[j * n + k];
                            }
                        }
                    }
                }
                out
            }
        };
        Ok(FockVector {
            cutoff: self.cutoff,
            tag: v.tag,
            amplitudes,
        })
    }

    /// `<v| self |v>`.
    pub fn expectation(&self, v: &FockVector) -> Result<Complex64> {
        v.inner(&self.apply(v)?)
    }

    /// Largest entry magnitude. Two-mode operators are scanned entry by entry
    /// without forming the Kronecker matrix.
    pub fn max_abs(&self) -> f64 {
        match &self.repr {
            Repr::Single(m) => m.max_abs(),
            Repr::Bipartite(terms) => {
                let n = self.cutoff;
                let mut scaled = vec![Complex64::new(0.0, 0.0); terms.len()];
                let mut max = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        for (s, t) in scaled.iter_mut().zip(terms) {
                            *s = t.coeff * t.a[(i, j)];
                        }
                        for k in 0..n {
                            for l in 0..n {
                                let mut acc = Complex64::new(0.0, 0.0);
                                for (s, t) in scaled.iter().zip(terms) {
                                    acc += s * t.b[(k, l)];
                                }
                                max = max.max(acc.norm());
                            }
                        }
                    }
                }
                max
            }
        }
    }

    /// `max |M - M^dagger|`.
    pub fn hermiticity_residual(&self) -> f64 {
        match &self.repr {
            Repr::Single(m) => m.hermiticity_residual(),
            Repr::Bipartite(_) => self
                .sub(&self.adjoint())
                .map(|d| d.max_abs())
                .unwrap_or(f64::INFINITY),
        }
    }
}
