//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's arithmetic.

#![allow(dead_code)]

use logk3::charclass::CocycleClass;
use logk3::dihedral::{CycleAction, DihedralElement};
use logk3::group::FiniteGroup;
use logk3::logk3::{enumerate_admissible, LogK3Structure};

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn valuation(mut n: i128, p: i128) -> (u32, i128) {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Is the nonzero integer `w` a square in `Q_p`?
pub fn is_padic_square(w: i128, p: u64) -> bool {
    let (v, u) = valuation(w, p as i128);
    if v % 2 == 1 {
        return false;
    }
    if p == 2 {
        return u.rem_euclid(8) == 1;
    }
    let r = u.rem_euclid(p as i128) as u64;
    pow_mod(r, (p - 1) / 2, p) == 1
}

/// Brute-force Hilbert symbol: `+1` iff some primitive `(x, y)` makes
/// `alpha x^2 + beta y^2` zero or a nonzero `p`-adic square. After removing
/// square factors of `p` both valuations are at most 1, and then
/// `x, y mod p^2` (odd `p`) or `mod 2^6` reach every square class.
pub fn hilbert_oracle(alpha: i64, beta: i64, p: Option<u64>) -> i8 {
    let Some(p) = p else {
        return if alpha < 0 && beta < 0 { -1 } else { 1 };
    };
    let strip = |n: i64| {
        let pp = (p * p) as i64;
        let mut n = n;
        while n % pp == 0 {
            n /= pp;
        }
        n as i128
    };
    let (a, b) = (strip(alpha), strip(beta));
    let modulus = if p == 2 { 64 } else { (p * p) as i128 };
    for x in 0..modulus {
        for y in 0..modulus {
            if x % p as i128 == 0 && y % p as i128 == 0 {
                continue;
            }
            let w = a * x * x + b * y * y;
            if w == 0 || is_padic_square(w, p) {
                return 1;
            }
        }
    }
    -1
}

/// Every admissible ample structure with every action of `group` that
/// preserves the sequence.
pub fn structures_for(group: &FiniteGroup) -> Vec<LogK3Structure> {
    let mut out = Vec::new();
    for d in 5..=8 {
        for seq in enumerate_admissible(d).unwrap() {
            for action in CycleAction::all_actions(group, seq.len()) {
                if let Ok(s) = LogK3Structure::new(d, seq.clone(), action, true) {
                    out.push(s);
                }
            }
        }
    }
    out
}

pub const SMALL_GROUPS: [&str; 18] = [
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "V4", "S3", "Z2xZ4", "Z2xZ2xZ2", "D4", "Q8", "Z3xZ3",
    "D5",
];

/// Composition `g after h` on the `n`-cycle, computed on vertex lists.
pub fn compose_by_permutation(g: DihedralElement, h: DihedralElement, n: usize) -> Vec<usize> {
    (0..n).map(|v| g.apply(h.apply(v, n), n)).collect()
}

/// Are two classes equal up to conjugation in `D5`, by direct search?
pub fn conjugate_classes(x: &CocycleClass, y: &CocycleClass) -> bool {
    if x.group != y.group || x.rep.len() != y.rep.len() {
        return false;
    }
    let n = 5;
    (0..n).flat_map(|r| [false, true].map(|f| DihedralElement { rot: r, refl: f })).any(|g| {
        x.rep.iter().zip(&y.rep).all(|(&a, &b)| {
            // g a g^-1 == b  <=>  g a == b g on vertices.
            compose_by_permutation(g, a, n) == compose_by_permutation(b, g, n)
        })
    })
}
