use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Q;

/// Exact rational from a pair of machine integers.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// 4×4 matrix over exact rationals. Indices are 0-based internally; docs use
/// the 1-based (row, col) labels of the block layout [[A, B], [C, D]].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix4 {
    pub e: [[Q; 4]; 4],
}

impl ExactMatrix4 {
    pub fn zero() -> Self {
        ExactMatrix4 {
            e: std::array::from_fn(|_| std::array::from_fn(|_| Q::zero())),
        }
    }

    pub fn identity() -> Self {
        Self::diag([Q::one(), Q::one(), Q::one(), Q::one()])
    }

    pub fn diag(d: [Q; 4]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.e[i][i] = v;
        }
        m
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Q) -> Self {
        ExactMatrix4 {
            e: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        Self::from_fn(|i, j| qi(rows[i][j]))
    }

    /// Standard symplectic form J = [[0, I], [−I, 0]].
    pub fn j_form() -> Self {
        Self::from_ints([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    }

    /// 1-based accessor matching the block notation (a₁₁ = get(1,1), c₂₂ = get(4,4) ...).
    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.e[i - 1][j - 1]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.e[j][i].clone())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::from_fn(|i, j| &self.e[i][j] * s)
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.e[i][j].is_zero()))
    }

    /// Blocks A, B, C, D as 2×2 arrays.
    pub fn block(&self, bi: usize, bj: usize) -> [[Q; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.e[2 * bi + i][2 * bj + j].clone()))
    }

    pub fn det(&self) -> Q {
        // Gaussian elimination over Q.
        let mut m = self.e.clone();
        let mut det = Q::one();
        for col in 0..4 {
            let Some(piv) = (col..4).find(|&r| !m[r][col].is_zero()) else {
                return Q::zero();
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            let p = m[col][col].clone();
            det *= &p;
            for r in col + 1..4 {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] / &p;
                for c in col..4 {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.e.clone();
        let mut inv = Self::identity().e;
        for col in 0..4 {
            let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let p = a[col][col].clone();
            for c in 0..4 {
                a[col][c] /= &p;
                inv[col][c] /= &p;
            }
            for r in 0..4 {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..4 {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                    let t = &f * &inv[col][c];
                    inv[r][c] -= t;
                }
            }
        }
        Some(ExactMatrix4 { e: inv })
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| q_to_f64(&self.e[i][j])))
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // Huge numerators/denominators: fall back on a scaled division.
        let shift = x.numer().bits().max(x.denom().bits()) as i64 - 1000;
        let shift = shift.max(0) as usize;
        let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    }
}

pub fn det2(m: &[[Q; 2]; 2]) -> Q {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

impl Mul for &ExactMatrix4 {
    type Output = ExactMatrix4;
    fn mul(self, rhs: &ExactMatrix4) -> ExactMatrix4 {
        ExactMatrix4::from_fn(|i, j| {
            let mut acc = Q::zero();
            for k in 0..4 {
                if !self.e[i][k].is_zero() && !rhs.e[k][j].is_zero() {
                    acc += &self.e[i][k] * &rhs.e[k][j];
                }
            }
            acc
        })
    }
}

impl Mul for ExactMatrix4 {
    type Output = ExactMatrix4;
    fn mul(self, rhs: ExactMatrix4) -> ExactMatrix4 {
        &self * &rhs
    }
}

impl Add for &ExactMatrix4 {
    type Output = ExactMatrix4;
    fn add(self, rhs: &ExactMatrix4) -> ExactMatrix4 {
        ExactMatrix4::from_fn(|i, j| &self.e[i][j] + &rhs.e[i][j])
    }
}

impl Sub for &ExactMatrix4 {
    type Output = ExactMatrix4;
    fn sub(self, rhs: &ExactMatrix4) -> ExactMatrix4 {
        ExactMatrix4::from_fn(|i, j| &self.e[i][j] - &rhs.e[i][j])
    }
}

impl Neg for &ExactMatrix4 {
    type Output = ExactMatrix4;
    fn neg(self) -> ExactMatrix4 {
        ExactMatrix4::from_fn(|i, j| -&self.e[i][j])
    }
}

impl fmt::Debug for ExactMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.e {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Fractional part in [0, 1).
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
