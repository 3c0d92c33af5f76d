//! Independent reference computations for the property tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use chow_core::divisor::{Divisor, Level, PlaceLabel};
use chow_core::orders::OrderData;
use chow_core::quadfield::{QElement, QuadField};

/// Determinant by fraction-free elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v: BigInt = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors `d_k / d_{k-1}` from the gcds `d_k` of the k×k minors,
/// padded with zeros to `min(rows, cols)`.
pub fn determinant_divisor_invariants(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let n = rows.min(cols);
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 1..=n {
        let mut d = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| BigInt::from(m[i][j])).collect()).collect();
                d = d.gcd(&det(&minor));
            }
        }
        if d.is_zero() {
            out.resize(n, BigInt::zero());
            return out;
        }
        out.push(&d / &prev);
        prev = d;
    }
    out
}

/// The Kronecker symbol `(d/n)` for `n > 0`.
pub fn kronecker(d: i64, n: u64) -> i64 {
    let mut n = n;
    let mut result = 1i64;
    while n.is_multiple_of(2) {
        n /= 2;
        result *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0,
        };
    }
    // Jacobi symbol (d/n) for odd n
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

pub fn is_fundamental(d: i64) -> bool {
    let squarefree = |n: i64| {
        let n = n.unsigned_abs();
        let mut p = 2u64;
        while p * p <= n {
            if n.is_multiple_of(p * p) {
                return false;
            }
            p += 1;
        }
        true
    };
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree(d / 4),
        _ => false,
    }
}

/// Class number of an imaginary field by the Dirichlet sum `-(w/2|d|) Σ χ(a) a`.
pub fn class_number_imaginary(d: i64) -> i64 {
    let n = d.unsigned_abs();
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let s: i64 = (1..n).map(|a| kronecker(d, a) * a as i64).sum();
    -w * s / (2 * n as i64)
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * core::f64::consts::LN_2
}

/// Class number of a real field from `h log ε = -½ Σ χ(a) log sin(πa/d)`.
/// `eps` must be the fundamental unit.
pub fn class_number_real(field: &QuadField, eps: &QElement) -> i64 {
    let d = field.disc().to_i64().unwrap();
    let (x, _, m) = field.sqrt_form(eps);
    // ε = (x + y√d)/m and ε̄ = ±1/ε, so log ε = log(x·2/m) up to ε^-2
    let trace: BigInt = x * 2 / m;
    let log_eps = match trace.to_f64() {
        Some(t) if t < 1e15 => {
            let n = field.norm(eps).numer().to_f64().unwrap();
            ((t + (t * t - 4.0 * n).sqrt()) / 2.0).ln()
        }
        _ => ln_big(&trace),
    };
    let s: f64 =
        (1..d).map(|a| kronecker(d, a as u64) as f64 * (core::f64::consts::PI * a as f64 / d as f64).sin().ln()).sum();
    (-s / (2.0 * log_eps)).round() as i64
}

/// Reduced primitive positive definite forms of discriminant `disc < 0`.
pub fn count_reduced_forms(disc: i64) -> i64 {
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && (a == c)) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

pub fn p_adic_valuation(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
        k += 1;
    }
    k
}

/// Checks `div_O(a)` against the norm: at a non-invertible prime the
/// coefficient is `v_p(N a)`; at an invertible place it agrees with the
/// divisor of the ideal `a Õ`; and `Π |O/𝔭|^{c_𝔭} = |N a|`.
pub fn check_order_divisor(order: &OrderData, a: &QElement, d: &Divisor) -> Result<(), String> {
    let field = order.field().unwrap();
    let norm = field.norm(a);
    let ideal_div = field.ideal_divisor(&field.principal_ideal(a).unwrap()).unwrap();
    let f = order.conductor().unwrap();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (label, c) in d.iter() {
        let p = label.prime().ok_or_else(|| format!("label {label}"))?;
        let size = if f.is_multiple_of(p) {
            if *label != PlaceLabel::Prime(p) {
                return Err(format!("non-invertible prime labelled {label}"));
            }
            let v = p_adic_valuation(norm.numer(), p) as i64 - p_adic_valuation(norm.denom(), p) as i64;
            if BigInt::from(v) != *c {
                return Err(format!("coefficient at {label}: {c} vs v_p(N) = {v}"));
            }
            p
        } else {
            let place = field.place(label).unwrap();
            if ideal_div.coeff(label) != *c {
                return Err(format!("coefficient at {label} differs from the ideal divisor"));
            }
            place.residue_size()
        };
        let pw = num_traits::pow(BigInt::from(size), c.abs().to_usize().unwrap());
        if c.is_positive() {
            num *= pw;
        } else {
            den *= pw;
        }
    }
    if num * norm.denom() != norm.numer().abs() * den {
        return Err("degree sum does not match the norm".into());
    }
    if ideal_div
        .iter()
        .any(|(l, c)| !c.is_zero() && l.prime().is_some_and(|p| !f.is_multiple_of(p)) && d.coeff(l) != *c)
    {
        return Err("missing invertible place".into());
    }
    if d.level() != Level::Order {
        return Err("wrong level".into());
    }
    Ok(())
}

/// Whether the exponents describe `fÕ` for some `f`: equal at split places,
/// even at ramified ones.
pub fn is_f_times_maximal(field: &QuadField, d: &Divisor) -> bool {
    use chow_core::quadfield::SplitKind;
    let mut primes: Vec<u64> = d.iter().filter_map(|(l, _)| l.prime()).collect();
    primes.dedup();
    primes.into_iter().all(|p| {
        let places = field.splitting(p).unwrap();
        let ks: Vec<BigInt> = places.iter().map(|pl| d.coeff(&pl.label())).collect();
        match field.split_kind(p) {
            SplitKind::Split => ks[0] == ks[1],
            SplitKind::Inert => true,
            SplitKind::Ramified => ks[0].is_even(),
        }
    })
}
