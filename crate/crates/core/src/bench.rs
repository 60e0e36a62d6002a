//! Timing of the two Pfaffian algorithms on random rational matrices.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactnum::Field;
use crate::pfaffian::random_skew;

/// Largest `n` timed with the recursive algorithm; its cost grows by about
/// a factor of three per step and passes ten seconds near `n = 12`.
pub const RECURSIVE_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub size: usize,
    /// `None` for `n > RECURSIVE_MAX_N`.
    pub recursive_ms: Option<f64>,
    pub eliminate_ms: f64,
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Smallest `n` from which elimination is faster at every measured size.
    pub crossover: Option<usize>,
}

impl BenchReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree != Some(false))
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:>4} {:>5} {:>14} {:>14} {:>6}\n", "n", "size", "recursive_ms", "eliminate_ms", "agree");
        for r in &self.rows {
            let rec = r.recursive_ms.map_or("-".to_string(), |t| format!("{t:.3}"));
            let agree = r.agree.map_or("-", |a| if a { "yes" } else { "NO" });
            out.push_str(&format!(
                "{:>4} {:>5} {:>14} {:>14.3} {:>6}\n",
                r.n, r.size, rec, r.eliminate_ms, agree
            ));
        }
        match self.crossover {
            Some(n) => out.push_str(&format!("crossover: elimination faster from n = {n}\n")),
            None => out.push_str("crossover: not reached\n"),
        }
        out
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

/// For `n = 1..=max_n`, time both algorithms on one random `2n × 2n`
/// rational skew matrix with entries from the pool of size `bound`.
pub fn bench_pfaffian<R: Rng + ?Sized>(max_n: usize, bound: u64, rng: &mut R) -> Result<BenchReport> {
    let field = Field::Rationals;
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let a = random_skew(field, 2 * n, rng, bound);
        let start = Instant::now();
        let e = a.pf_eliminate()?;
        let eliminate_ms = millis(start);
        let (recursive_ms, agree) = if n <= RECURSIVE_MAX_N {
            let start = Instant::now();
            let r = a.pf_recursive()?;
            (Some(millis(start)), Some(r == e))
        } else {
            (None, None)
        };
        rows.push(BenchRow {
            n,
            size: 2 * n,
            recursive_ms,
            eliminate_ms,
            agree,
        });
    }
    let faster = |r: &BenchRow| r.recursive_ms.is_none_or(|t| r.eliminate_ms < t);
    let crossover = (0..rows.len())
        .find(|&i| rows[i..].iter().all(faster))
        .map(|i| rows[i].n);
    Ok(BenchReport { rows, crossover })
}
