//! Partial and ordinary Bell polynomials over an arbitrary commutative-ring
//! argument type (exact scalars or truncated series).
//!
//! `partial_bell(p, q, x)` sums `p! / (prod b_j! (j!)^{b_j}) * prod x_j^{b_j}`
//! and `ordinary_bell(p, q, x)` sums `q! / (prod b_j!) * prod x_j^{b_j}`, both
//! over the index vectors with `sum b_j = q` and `sum j*b_j = p`. Callers must
//! supply at least `p - q + 1` arguments; both require `1 <= q <= p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::series1::Series1;

/// Ring operations needed to evaluate a Bell polynomial.
pub trait BellValue: Clone {
    fn add_val(&self, rhs: &Self) -> Self;
    fn mul_val(&self, rhs: &Self) -> Self;
    fn scale_val(&self, factor: &ExactScalar) -> Self;
}

impl BellValue for ExactScalar {
    fn add_val(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul_val(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale_val(&self, factor: &ExactScalar) -> Self {
        self * factor
    }
}

impl BellValue for Series1 {
    fn add_val(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn mul_val(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn scale_val(&self, factor: &ExactScalar) -> Self {
        self.scale(factor)
    }
}

/// One index vector `(j, b_j)` (nonzero entries only) with both coefficients.
struct Partition {
    factors: Vec<(usize, usize)>,
    partial: ExactScalar,
    ordinary: ExactScalar,
}

type PartitionCache = Mutex<HashMap<(usize, usize), Arc<Vec<Partition>>>>;

fn partition_table(p: usize, q: usize) -> Arc<Vec<Partition>> {
    static CACHE: OnceLock<PartitionCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((p, q))
        .or_insert_with(|| Arc::new(enumerate_partitions(p, q)))
        .clone()
}

/// All `b` with `sum b_j = q`, `sum j b_j = p`, built by descending part size.
fn enumerate_partitions(p: usize, q: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut counts: Vec<(usize, usize)> = Vec::new();
    descend(p, q, p - q + 1, &mut counts, &mut out);
    out
}

/// Chooses the multiplicity of part size `j`, then recurses on smaller parts.
/// Remaining parts are all in `[1, j]`, which bounds the reachable weight.
fn descend(
    weight_left: usize,
    parts_left: usize,
    j: usize,
    counts: &mut Vec<(usize, usize)>,
    out: &mut Vec<Partition>,
) {
    if parts_left == 0 {
        if weight_left == 0 {
            out.push(finish(counts));
        }
        return;
    }
    if j == 0 || weight_left < parts_left || weight_left > parts_left * j {
        return;
    }
    for b in 0..=(weight_left / j).min(parts_left) {
        if b > 0 {
            counts.push((j, b));
        }
        descend(weight_left - j * b, parts_left - b, j - 1, counts, out);
        if b > 0 {
            counts.pop();
        }
    }
}

fn finish(counts: &[(usize, usize)]) -> Partition {
    let p: usize = counts.iter().map(|&(j, b)| j * b).sum();
    let q: usize = counts.iter().map(|&(_, b)| b).sum();
    let mut partial_den = ExactScalar::one();
    let mut ordinary_den = ExactScalar::one();
    for &(j, b) in counts {
        let bf = ExactScalar::factorial(b);
        ordinary_den = &ordinary_den * &bf;
        partial_den = &partial_den * &(&bf * &ExactScalar::factorial(j).pow(b as u32));
    }
    Partition {
        factors: counts.to_vec(),
        partial: &ExactScalar::factorial(p) / &partial_den,
        ordinary: &ExactScalar::factorial(q) / &ordinary_den,
    }
}

fn check_arguments<V>(p: usize, q: usize, args: &[V]) -> Result<()> {
    if q == 0 || q > p {
        return Err(Error::BellArguments(format!(
            "indices ({p}, {q}) outside 1 <= q <= p"
        )));
    }
    if args.len() < p - q + 1 {
        return Err(Error::BellArguments(format!(
            "need {} arguments for indices ({p}, {q}), got {}",
            p - q + 1,
            args.len()
        )));
    }
    Ok(())
}

fn evaluate<V: BellValue>(p: usize, q: usize, args: &[V], ordinary: bool) -> Result<V> {
    check_arguments(p, q, args)?;
    let table = partition_table(p, q);
    let mut acc: Option<V> = None;
    for row in table.iter() {
        let mut term: Option<V> = None;
        for &(j, b) in &row.factors {
            let x = &args[j - 1];
            for _ in 0..b {
                term = Some(match term {
                    None => x.clone(),
                    Some(t) => t.mul_val(x),
                });
            }
        }
        let coeff = if ordinary {
            &row.ordinary
        } else {
            &row.partial
        };
        let term = term
            .expect("q >= 1 gives a nonempty factor list")
            .scale_val(coeff);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add_val(&term),
        });
    }
    Ok(acc.expect("1 <= q <= p guarantees at least one index vector"))
}

pub fn partial_bell<V: BellValue>(p: usize, q: usize, args: &[V]) -> Result<V> {
    evaluate(p, q, args, false)
}

pub fn ordinary_bell<V: BellValue>(p: usize, q: usize, args: &[V]) -> Result<V> {
    evaluate(p, q, args, true)
}
