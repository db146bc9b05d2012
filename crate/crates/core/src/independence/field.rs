use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Rank of sparse rows (column -> residue) over `F_p`.
pub fn rank_mod_p(rows: &[BTreeMap<usize, u64>], p: u64) -> usize {
    // pivot column -> normalized row with leading entry 1 at that column
    let mut pivots: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    for row in rows {
        let mut v: BTreeMap<usize, u64> = row.iter().filter(|(_, &x)| x % p != 0).map(|(&c, &x)| (c, x % p)).collect();
        while let Some((&lead, &coef)) = v.iter().next() {
            match pivots.get(&lead) {
                Some(piv) => {
                    for (&c, &x) in piv {
                        let cur = v.get(&c).copied().unwrap_or(0);
                        let sub = mul_mod(coef, x, p);
                        let nv = (cur + p - sub) % p;
                        if nv == 0 {
                            v.remove(&c);
                        } else {
                            v.insert(c, nv);
                        }
                    }
                }
                None => {
                    let inv = inv_mod(coef, p);
                    for x in v.values_mut() {
                        *x = mul_mod(*x, inv, p);
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Kernel dimension of a dense system with `n` unknowns.
pub(crate) fn nullity_mod_p(equations: &[Vec<u64>], n: usize, p: u64) -> usize {
    let rows: Vec<BTreeMap<usize, u64>> = equations
        .iter()
        .map(|e| e.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect())
        .collect();
    n - rank_mod_p(&rows, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(DEFAULT_PRIME));
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(91) && !is_prime(DEFAULT_PRIME - 2));
        // strong pseudoprime to several small bases
        assert!(!is_prime(3_215_031_751));
        let brute = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..2000 {
            assert_eq!(is_prime(n), brute(n), "{n}");
        }
    }

    #[test]
    fn small_ranks() {
        let p = 101;
        let row = |v: &[(usize, u64)]| v.iter().copied().collect::<BTreeMap<_, _>>();
        let rows = [row(&[(0, 1), (1, 2)]), row(&[(0, 2), (1, 4)]), row(&[(1, 1)])];
        assert_eq!(rank_mod_p(&rows, p), 2);
        assert_eq!(rank_mod_p(&[], p), 0);
        assert_eq!(rank_mod_p(&[row(&[(3, 101)])], p), 0);
    }
}
