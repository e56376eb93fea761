use num_complex::Complex64;
use num_integer::Integer;

use super::SumError;

/// Dirichlet character mod N stored as a value table (0 on non-units).
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletChar {
    modulus: u64,
    values: Vec<Complex64>,
}

const TOL: f64 = 1e-9;

impl DirichletChar {
    pub fn trivial(modulus: u64) -> Self {
        let values = (0..modulus.max(1))
            .map(|k| if k.gcd(&modulus) == 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
            .collect();
        DirichletChar { modulus: modulus.max(1), values }
    }

    /// Checks χ(1) = 1, |χ| = 1 on units, 0 on non-units, and complete multiplicativity.
    pub fn from_table(modulus: u64, values: Vec<Complex64>) -> Result<Self, SumError> {
        if modulus == 0 || values.len() as u64 != modulus {
            return Err(SumError::InvalidCharacter("table length must equal the modulus"));
        }
        let n = modulus;
        for k in 0..n {
            let unit = k.gcd(&n) == 1;
            let v = values[k as usize];
            if unit && (v.norm() - 1.0).abs() > TOL {
                return Err(SumError::InvalidCharacter("values on units must have modulus 1"));
            }
            if !unit && v.norm() > TOL {
                return Err(SumError::InvalidCharacter("values on non-units must vanish"));
            }
        }
        if (values[(1 % n) as usize] - Complex64::new(1.0, 0.0)).norm() > TOL {
            return Err(SumError::InvalidCharacter("chi(1) must be 1"));
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = values[((a * b) % n) as usize];
                if (lhs - values[a as usize] * values[b as usize]).norm() > TOL {
                    return Err(SumError::InvalidCharacter("table is not multiplicative"));
                }
            }
        }
        Ok(DirichletChar { modulus, values })
    }

    /// χ(g^j) = e(kj/(p−1)) for a prime modulus p with its least primitive root g.
    pub fn prime_power_of_generator(p: u64, k: i64) -> Result<Self, SumError> {
        if p < 2 || !super::elementary::is_prime(p) {
            return Err(SumError::InvalidCharacter("modulus must be prime"));
        }
        let order = p - 1;
        let g = (1..p).find(|&g| is_primitive_root(g, p)).expect("primes have primitive roots");
        let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
        let mut x = 1u64;
        for j in 0..order {
            let phase = 2.0 * std::f64::consts::PI * ((k as f64) * (j as f64) / order as f64);
            values[x as usize] = Complex64::from_polar(1.0, phase);
            x = x * g % p;
        }
        Self::from_table(p, values)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn eval(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn eval_conj(&self, n: i64) -> Complex64 {
        self.eval(n).conj()
    }

    pub fn is_even(&self) -> bool {
        (self.eval(-1) - Complex64::new(1.0, 0.0)).norm() < TOL
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn is_primitive_root(g: u64, p: u64) -> bool {
    let order = p - 1;
    super::elementary::factorize(order)
        .into_iter()
        .all(|(q, _)| pow_mod(g, order / q, p) != 1)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}
