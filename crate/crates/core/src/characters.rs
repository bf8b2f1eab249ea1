//! Real Dirichlet characters and their Gauss sums.
//!
//! For odd square-free `q` the unique primitive real character modulo `q` is
//! the Jacobi symbol `(·|q)`. Two even moduli are also supported: the odd
//! character modulo 4 and the even primitive character modulo 8 (`χ(±1) = 1`,
//! `χ(±3) = −1`).

use num_complex::Complex64;

use crate::error::{domain, precondition, Error, Result};
use crate::expsums::unit;

/// Moduli up to this size keep a dense value table.
pub const DENSE_TABLE_MAX: u64 = 1_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(domain("totient(0) is undefined"));
    }
    Ok(factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

/// Möbius function; `mobius(1) = 1`.
pub fn mobius(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(domain("mobius(0) is undefined"));
    }
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}

pub fn is_odd_squarefree(q: u64) -> bool {
    q % 2 == 1 && factorize(q).iter().all(|&(_, e)| e == 1)
}

/// Jacobi symbol `(n|q)` for odd positive `q`.
pub fn jacobi(n: i64, q: u64) -> Result<i8> {
    if q % 2 == 0 {
        return Err(domain(format!("Jacobi symbol needs an odd modulus, got {q}")));
    }
    let mut a = (i128::from(n)).rem_euclid(i128::from(q)) as u64;
    let mut m = q;
    let mut sign = 1i8;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && (m % 8 == 3 || m % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        (a, m) = (m % a, a);
    }
    Ok(if m == 1 { sign } else { 0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterKind {
    /// Jacobi symbol modulo an odd square-free `q`.
    Jacobi,
    Mod4,
    Mod8,
}

/// A real primitive Dirichlet character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealCharacter {
    modulus: u64,
    kind: CharacterKind,
    table: Option<Vec<i8>>,
    parity: Parity,
    primitive: bool,
}

/// Builds the primitive real character modulo `q`.
///
/// Accepts odd square-free `q >= 3`, and `q ∈ {4, 8}`.
pub fn real_character(q: u64) -> Result<RealCharacter> {
    let kind = match q {
        4 => CharacterKind::Mod4,
        8 => CharacterKind::Mod8,
        _ if q < 3 => {
            return Err(Error::UnsupportedModulus {
                modulus: q,
                reason: "modulus must be at least 3 (or 4, 8)",
            })
        }
        _ if q % 2 == 0 => {
            return Err(Error::UnsupportedModulus {
                modulus: q,
                reason: "even moduli other than 4 and 8 are not supported",
            })
        }
        _ if !is_odd_squarefree(q) => {
            return Err(Error::UnsupportedModulus { modulus: q, reason: "not square-free" })
        }
        _ => CharacterKind::Jacobi,
    };
    let parity = match kind {
        CharacterKind::Mod4 => Parity::Odd,
        CharacterKind::Mod8 => Parity::Even,
        CharacterKind::Jacobi if q % 4 == 3 => Parity::Odd,
        CharacterKind::Jacobi => Parity::Even,
    };
    let mut chi = RealCharacter { modulus: q, kind, table: None, parity, primitive: true };
    if q <= DENSE_TABLE_MAX {
        chi.table = Some((0..q).map(|r| chi.compute(r)).collect());
    }
    Ok(chi)
}

impl RealCharacter {
    fn compute(&self, r: u64) -> i8 {
        match self.kind {
            CharacterKind::Mod4 => match r % 4 {
                1 => 1,
                3 => -1,
                _ => 0,
            },
            CharacterKind::Mod8 => match r % 8 {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            },
            CharacterKind::Jacobi => {
                jacobi(r as i64, self.modulus).expect("odd modulus checked at construction")
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn kind(&self) -> CharacterKind {
        self.kind
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// `χ(n)` for any integer `n`.
    pub fn value(&self, n: i64) -> i8 {
        let r = i128::from(n).rem_euclid(i128::from(self.modulus)) as u64;
        match &self.table {
            Some(t) => t[r as usize],
            None => self.compute(r),
        }
    }

    /// Values at residues `0..q`.
    pub fn values(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.modulus).map(|r| self.value(r as i64))
    }

    /// `Σ_r χ(r)` in integers; zero for every character built here.
    pub fn value_sum(&self) -> i64 {
        self.values().map(i64::from).sum()
    }
}

/// `τ(χ) = Σ_{k=1}^{q} χ(k) e(k/q)`.
pub fn gauss_sum(chi: &RealCharacter) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(precondition("Gauss sum requested for an imprimitive character"));
    }
    let q = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=q {
        match chi.value(k as i64) {
            1 => acc += unit(k as i64, q),
            -1 => acc -= unit(k as i64, q),
            _ => {}
        }
    }
    Ok(acc)
}

/// The closed-form value of `τ(χ)` for the characters built by
/// [`real_character`]: `√q` or `i√q` by `q mod 4` for odd `q`, `2i` for
/// `q = 4`, and `2√2` for `q = 8`.
pub fn gauss_sum_closed_form(chi: &RealCharacter) -> Complex64 {
    let q = chi.modulus();
    let root = (q as f64).sqrt();
    match chi.kind() {
        CharacterKind::Mod4 => Complex64::new(0.0, 2.0),
        CharacterKind::Mod8 => Complex64::new(2.0 * std::f64::consts::SQRT_2, 0.0),
        CharacterKind::Jacobi if q % 4 == 1 => Complex64::new(root, 0.0),
        CharacterKind::Jacobi => Complex64::new(0.0, root),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Legendre symbol by listing quadratic residues; `p` an odd prime.
    fn legendre_oracle(n: i64, p: u64) -> i8 {
        let r = n.rem_euclid(p as i64) as u64;
        if r == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(totient(15).unwrap(), 8);
        let n = 2 * 3 * 5 * 7 * 11;
        let brute = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
        assert_eq!(totient(n).unwrap(), brute);
        assert_eq!(brute, 480);
        assert!(totient(0).is_err());
    }

    #[test]
    fn mobius_values() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (n, &m) in (1..=10).zip(&expect) {
            assert_eq!(mobius(n).unwrap(), m, "n = {n}");
        }
    }

    #[test]
    fn squarefree_gate() {
        assert!(is_odd_squarefree(15));
        assert!(!is_odd_squarefree(9));
        assert!(is_odd_squarefree(105));
        assert!(!is_odd_squarefree(30));
        assert!(is_odd_squarefree(1));
    }

    #[test]
    fn jacobi_examples() {
        for q in (1..200).step_by(2) {
            assert_eq!(jacobi(1, q).unwrap(), 1);
        }
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(legendre_oracle(2, 3) * legendre_oracle(2, 5), 1);
        assert!(jacobi(3, 45).is_ok());
        assert!(matches!(real_character(45), Err(Error::UnsupportedModulus { .. })));
        assert!(jacobi(3, 10).is_err());
        assert_eq!(jacobi(-1, 7).unwrap(), -1);
        assert_eq!(jacobi(-1, 5).unwrap(), 1);
        assert_eq!(jacobi(i64::MIN, 7).unwrap(), legendre_oracle(i64::MIN % 7 + 7, 7));
    }

    #[test]
    fn jacobi_matches_legendre_oracle() {
        let odd_primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];
        for &p in &odd_primes {
            for n in -150..150 {
                assert_eq!(jacobi(n, p).unwrap(), legendre_oracle(n, p), "({n}|{p})");
            }
        }
    }

    #[test]
    fn character_tables() {
        assert_eq!(real_character(3).unwrap().values().collect::<Vec<_>>(), vec![0, 1, -1]);
        assert_eq!(real_character(4).unwrap().values().collect::<Vec<_>>(), vec![0, 1, 0, -1]);
        assert_eq!(
            real_character(8).unwrap().values().collect::<Vec<_>>(),
            vec![0, 1, 0, -1, 0, -1, 0, 1]
        );
        let chi = real_character(15).unwrap();
        assert_eq!(chi.value(2), 1);
        assert_eq!(chi.parity(), Parity::Odd);
        assert_eq!(real_character(5).unwrap().parity(), Parity::Even);
        assert_eq!(real_character(8).unwrap().parity(), Parity::Even);
        assert_eq!(real_character(4).unwrap().parity(), Parity::Odd);
    }

    #[test]
    fn unsupported_moduli() {
        for q in [0, 1, 2, 6, 9, 12, 16, 45] {
            assert!(matches!(real_character(q), Err(Error::UnsupportedModulus { .. })), "q = {q}");
        }
    }

    #[test]
    fn table_invariants() {
        for q in (3..400).filter(|&q| is_odd_squarefree(q)).chain([4, 8]) {
            let chi = real_character(q).unwrap();
            assert_eq!(chi.value_sum(), 0, "q = {q}");
            for a in 0..q {
                assert_eq!(chi.value(a as i64) == 0, gcd(a, q) > 1, "q = {q}, a = {a}");
                for b in 0..q {
                    assert_eq!(chi.value((a * b) as i64), chi.value(a as i64) * chi.value(b as i64));
                }
            }
            let parity = if chi.value(q as i64 - 1) == -1 { Parity::Odd } else { Parity::Even };
            assert_eq!(chi.parity(), parity);
        }
    }

    #[test]
    fn on_demand_values_match_table() {
        let q = 1_000_003; // prime, above the dense-table bound
        let chi = real_character(q).unwrap();
        assert!(chi.table.is_none());
        for n in [1i64, 2, 3, 1000, 999_999, -5] {
            assert_eq!(chi.value(n), jacobi(n, q).unwrap());
        }
    }

    #[test]
    fn gauss_sum_values() {
        let t7 = gauss_sum(&real_character(7).unwrap()).unwrap();
        assert!(t7.re.abs() < 1e-9 && (t7.im - 7f64.sqrt()).abs() < 1e-9);
        let t5 = gauss_sum(&real_character(5).unwrap()).unwrap();
        assert!(t5.im.abs() < 1e-9 && (t5.re - 5f64.sqrt()).abs() < 1e-9);
        let t4 = gauss_sum(&real_character(4).unwrap()).unwrap();
        assert!((t4 - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        let t8 = gauss_sum(&real_character(8).unwrap()).unwrap();
        assert!((t8 - Complex64::new(8f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gauss_sum_modulus_and_axis() {
        for q in (3..=1000).filter(|&q| is_odd_squarefree(q)) {
            let chi = real_character(q).unwrap();
            let t = gauss_sum(&chi).unwrap();
            assert!((t.norm_sqr() / q as f64 - 1.0).abs() < 1e-6, "q = {q}");
            let root = (q as f64).sqrt();
            if q % 4 == 1 {
                assert!(t.im.abs() <= 1e-9 * root && t.re > 0.0, "q = {q}: {t}");
            } else {
                assert!(t.re.abs() <= 1e-9 * root && t.im > 0.0, "q = {q}: {t}");
            }
            assert!((t - gauss_sum_closed_form(&chi)).norm() <= 1e-9 * root);
        }
    }
}
