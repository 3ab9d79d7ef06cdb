use rayon::prelude::*;

const SEGMENT: u64 = 1 << 18;

/// Primes `p ≤ n` in increasing order (segmented sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let root = (n as f64).sqrt() as u64 + 1;
    let base = small_primes(root.min(n));
    if n <= root {
        return base;
    }
    let segments: Vec<u64> = (root + 1..=n).step_by(SEGMENT as usize).collect();
    let mut out = base.clone();
    let chunks: Vec<Vec<u64>> = segments
        .par_iter()
        .map(|&lo| {
            let hi = (lo + SEGMENT - 1).min(n);
            sieve_segment(lo, hi, &base)
        })
        .collect();
    for c in chunks {
        out.extend(c);
    }
    out
}

fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| lo + i as u64).collect()
}

/// Least-prime-factor table for `0..=n`; `lpf[1] = 1` and `lpf[0] = 0`.
pub fn lpf_table(n: usize) -> Vec<u32> {
    let mut lpf = vec![0u32; n + 1];
    if n >= 1 {
        lpf[1] = 1;
    }
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if lpf[i] == 0 {
            lpf[i] = i as u32;
            primes.push(i as u32);
        }
        let li = lpf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > li || m > n {
                break;
            }
            lpf[m] = p;
        }
    }
    lpf
}

/// Deterministic trial-division primality test, for oracles and small inputs.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
