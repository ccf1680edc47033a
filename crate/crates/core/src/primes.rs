//! Prime enumeration: a segmented sieve of Eratosthenes plus a
//! process-wide cache so sweeps share one table.

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

/// Largest bound the sieve accepts.
pub const SIEVE_CAPACITY: u64 = 100_000_000;

const SEGMENT: usize = 1 << 16;

/// All primes `<= limit`, ascending.
pub fn sieve(limit: u64) -> Result<Vec<u64>> {
    if limit > SIEVE_CAPACITY {
        return Err(Error::Capacity(format!(
            "sieve bound {limit} exceeds capacity {SIEVE_CAPACITY}"
        )));
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    let limit = limit as usize;
    let root = (limit as f64).sqrt() as usize + 1;

    // base primes up to sqrt(limit), plain sieve
    let mut small = vec![true; root + 1];
    small[0] = false;
    small[1] = false;
    let mut i = 2;
    while i * i <= root {
        if small[i] {
            let mut j = i * i;
            while j <= root {
                small[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    let base: Vec<usize> = (2..=root).filter(|&k| small[k]).collect();

    let mut out = Vec::with_capacity(estimate_count(limit));
    let mut seg = vec![true; SEGMENT];
    let mut low = 2usize;
    while low <= limit {
        let high = (low + SEGMENT - 1).min(limit);
        let len = high - low + 1;
        seg[..len].iter_mut().for_each(|b| *b = true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut start = low.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut j = start;
            while j <= high {
                seg[j - low] = false;
                j += p;
            }
        }
        out.extend(
            seg[..len]
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(k, _)| (low + k) as u64),
        );
        low = high + 1;
    }
    Ok(out)
}

fn estimate_count(limit: usize) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize
}

static CACHE: Mutex<Option<(u64, Arc<Vec<u64>>)>> = Mutex::new(None);

/// Shared, read-only prime table covering at least `limit`. Callers take
/// `&table[..count_up_to(&table, limit)]`.
pub fn shared_primes(limit: u64) -> Result<Arc<Vec<u64>>> {
    let mut guard = CACHE.lock().expect("prime cache poisoned");
    if let Some((bound, table)) = guard.as_ref() {
        if *bound >= limit {
            return Ok(Arc::clone(table));
        }
    }
    let table = Arc::new(sieve(limit)?);
    *guard = Some((limit, Arc::clone(&table)));
    Ok(table)
}

/// Primes `<= limit` as an owned vector, served from the shared table.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    let table = shared_primes(limit)?;
    let n = table.partition_point(|&p| p <= limit);
    Ok(table[..n].to_vec())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
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
