//! Exact combinatorics behind the Kedlaya inequality, and numerical checks of
//! the inequality itself.
//!
//! For `n` and `(i, j, k) ∈ {1..n}³` the coefficient is
//!
//! ```text
//! a_k(i, j) = (n−1)! · C(n−i, j−k) · C(i−1, k−1) / C(n−1, j−1)
//! ```
//!
//! where a binomial with an out-of-range lower index is zero. The `n! × n!`
//! matrix is split into `(n−1)! × (n−1)!` blocks `A_{i,j}`; the first row of
//! `A_{i,j}` lists symbol `k` exactly `a_k(i, j)` times (ascending `k`) and
//! every further row is a cyclic shift of it.

use serde::Serialize;

use crate::error::{MeanError, Result};
use crate::expr::MeanExpr;
use crate::prefix::prefix_means;
use crate::sample::SampleVector;

/// Largest `n` for which coefficients are exact in 64-bit arithmetic.
pub const MAX_COEFF_N: usize = 12;
/// Largest `n` for which the `n! × n!` matrix is materialized.
pub const MAX_MATRIX_N: usize = 6;

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn check_n(n: usize, max: usize, min: usize, range: &'static str) -> Result<()> {
    if n < min || n > max {
        Err(MeanError::OutOfRange {
            what: "n",
            value: n as i64,
            range,
        })
    } else {
        Ok(())
    }
}

/// Numerator and denominator of `a_k(i, j)` before the exact division.
fn coefficient_parts(n: usize, i: usize, j: usize, k: usize) -> (u128, u128) {
    let (n, i, j, k) = (n as i64, i as i64, j as i64, k as i64);
    let num = factorial((n - 1) as usize) * binomial(n - i, j - k) * binomial(i - 1, k - 1);
    (num, binomial(n - 1, j - 1))
}

/// `a_k(i, j)` for `1 ≤ i, j, k ≤ n ≤ 12`.
pub fn kedlaya_coefficient(n: usize, i: usize, j: usize, k: usize) -> Result<u64> {
    check_n(n, MAX_COEFF_N, 1, "1..=12")?;
    for (what, v) in [("i", i), ("j", j), ("k", k)] {
        if v < 1 || v > n {
            return Err(MeanError::OutOfRange {
                what,
                value: v as i64,
                range: "1..=n",
            });
        }
    }
    let (num, den) = coefficient_parts(n, i, j, k);
    Ok((num / den) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KedlayaTable {
    n: usize,
    coeffs: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditItem {
    pub property: u8,
    pub statement: &'static str,
    pub holds: bool,
    /// First `(i, j, k)` (or `(i, j, 0)` / `(0, j, k)` for sums) that fails.
    pub first_violation: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableAudit {
    pub n: usize,
    pub items: Vec<AuditItem>,
}

impl TableAudit {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|i| i.holds)
    }
}

impl KedlayaTable {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n, MAX_COEFF_N, 1, "1..=12")?;
        let mut coeffs = Vec::with_capacity(n * n * n);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    coeffs.push(kedlaya_coefficient(n, i, j, k)?);
                }
            }
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a_k(i, j)`, 1-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let n = self.n;
        self.coeffs[((i - 1) * n + (j - 1)) * n + (k - 1)]
    }

    /// Exact integer audit of the six coefficient properties.
    pub fn audit(&self) -> TableAudit {
        let n = self.n;
        let triples = || {
            (1..=n).flat_map(move |i| (1..=n).flat_map(move |j| (1..=n).map(move |k| (i, j, k))))
        };
        let n_fact = factorial(n) as u64;
        let n1_fact = factorial(n - 1) as u64;

        // (1) holds by type; checked against the exact division instead.
        let nonneg = triples().find(|&(i, j, k)| {
            let (num, den) = coefficient_parts(n, i, j, k);
            den == 0 || (num / den) as u64 != self.get(i, j, k)
        });
        let integral = triples().find(|&(i, j, k)| {
            let (num, den) = coefficient_parts(n, i, j, k);
            num % den != 0
        });
        let vanishing = triples().find(|&(i, j, k)| k > i.min(j) && self.get(i, j, k) != 0);
        let symmetric = triples().find(|&(i, j, k)| self.get(i, j, k) != self.get(j, i, k));
        let row_sums = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .find(|&(i, j)| (1..=n).map(|k| self.get(i, j, k)).sum::<u64>() != n1_fact)
            .map(|(i, j)| (i, j, 0));
        let col_sums = (1..=n)
            .flat_map(|j| (1..=n).map(move |k| (j, k)))
            .find(|&(j, k)| {
                let s: u64 = (1..=n).map(|i| self.get(i, j, k)).sum();
                let expected = if k <= j { n_fact / j as u64 } else { 0 };
                s != expected
            })
            .map(|(j, k)| (0, j, k));

        let item = |property, statement, v: Option<(usize, usize, usize)>| AuditItem {
            property,
            statement,
            holds: v.is_none(),
            first_violation: v,
        };
        TableAudit {
            n,
            items: vec![
                item(1, "a_k(i,j) >= 0", nonneg),
                item(2, "a_k(i,j) is an integer", integral),
                item(3, "a_k(i,j) = 0 for k > min(i,j)", vanishing),
                item(4, "a_k(i,j) = a_k(j,i)", symmetric),
                item(5, "sum_k a_k(i,j) = (n-1)!", row_sums),
                item(6, "sum_i a_k(i,j) = n!/j for k <= j, else 0", col_sums),
            ],
        }
    }
}

/// The `n! × n!` symbol matrix, entries in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KedlayaMatrix {
    n: usize,
    size: usize,
    block: usize,
    entries: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixAudit {
    pub n: usize,
    pub size: usize,
    /// Every row and column of every block holds `k` exactly `a_k(i,j)` times.
    pub blocks_ok: bool,
    /// Row `p` and column `p` hold `k` exactly `n!/b(p)` times for `k ≤ b(p)`.
    pub lines_ok: bool,
    pub entries_in_range: bool,
    pub first_bad_line: Option<usize>,
}

impl MatrixAudit {
    pub fn all_hold(&self) -> bool {
        self.blocks_ok && self.lines_ok && self.entries_in_range
    }
}

/// Builds the block matrix for `2 ≤ n ≤ 6`.
pub fn kedlaya_matrix(n: usize) -> Result<KedlayaMatrix> {
    check_n(n, MAX_MATRIX_N, 2, "2..=6")?;
    let table = KedlayaTable::new(n)?;
    let block = factorial(n - 1) as usize;
    let size = n * block;
    let mut entries = vec![0u8; size * size];
    for bi in 1..=n {
        for bj in 1..=n {
            let first: Vec<u8> = (1..=n)
                .flat_map(|k| std::iter::repeat_n(k as u8, table.get(bi, bj, k) as usize))
                .collect();
            debug_assert_eq!(first.len(), block);
            for r in 0..block {
                let row = (bi - 1) * block + r;
                for c in 0..block {
                    let col = (bj - 1) * block + c;
                    entries[row * size + col] = first[(c + r) % block];
                }
            }
        }
    }
    Ok(KedlayaMatrix {
        n,
        size,
        block,
        entries,
    })
}

impl KedlayaMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// 0-based entry.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.size + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks(self.size)
    }

    /// `b(p)` for a 1-based row index `p`.
    pub fn block_of(&self, p: usize) -> usize {
        (p - 1) / self.block + 1
    }

    fn counts<I: Iterator<Item = u8>>(&self, it: I) -> Vec<u64> {
        let mut c = vec![0u64; self.n + 1];
        for v in it {
            c[v as usize] += 1;
        }
        c
    }

    pub fn row_counts(&self, row: usize) -> Vec<u64> {
        self.counts((0..self.size).map(|c| self.get(row, c)))
    }

    pub fn col_counts(&self, col: usize) -> Vec<u64> {
        self.counts((0..self.size).map(|r| self.get(r, col)))
    }

    /// Exhaustive occurrence-count audit.
    pub fn audit(&self) -> MatrixAudit {
        let n = self.n;
        let table = KedlayaTable::new(n).expect("n validated at construction");
        let entries_in_range = self.entries.iter().all(|&v| v >= 1 && v as usize <= n);

        let mut blocks_ok = true;
        'blocks: for bi in 1..=n {
            for bj in 1..=n {
                for t in 0..self.block {
                    let mut rc = vec![0u64; n + 1];
                    let mut cc = vec![0u64; n + 1];
                    for u in 0..self.block {
                        let (r0, c0) = ((bi - 1) * self.block, (bj - 1) * self.block);
                        rc[self.get(r0 + t, c0 + u) as usize] += 1;
                        cc[self.get(r0 + u, c0 + t) as usize] += 1;
                    }
                    if (1..=n).any(|k| rc[k] != table.get(bi, bj, k) || cc[k] != table.get(bi, bj, k)) {
                        blocks_ok = false;
                        break 'blocks;
                    }
                }
            }
        }

        let n_fact = factorial(n) as u64;
        let first_bad_line = (0..self.size).find(|&p0| {
            let b = self.block_of(p0 + 1);
            let expected = |k: usize| if k <= b { n_fact / b as u64 } else { 0 };
            let (rc, cc) = (self.row_counts(p0), self.col_counts(p0));
            (1..=n).any(|k| rc[k] != expected(k) || cc[k] != expected(k))
        });

        MatrixAudit {
            n,
            size: self.size,
            blocks_ok,
            lines_ok: first_bad_line.is_none(),
            entries_in_range,
            first_bad_line,
        }
    }
}

/// `M(x_1, (x_1+x_2)/2, …)` minus the average of `M(x_1), M(x_1,x_2), …`.
/// Nonnegative when the Kedlaya inequality holds at `x`.
pub fn check_kedlaya_inequality(expr: &MeanExpr, x: &SampleVector) -> Result<f64> {
    let prefixes = prefix_means(expr, x)?;
    let lhs = prefixes.iter().sum::<f64>() / x.len() as f64;
    let rhs = expr.evaluate(&prefix_averages(x))?;
    Ok(rhs - lhs)
}

fn prefix_averages(x: &SampleVector) -> SampleVector {
    let mut acc = 0.0;
    let avgs = x
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            acc += v;
            acc / (k + 1) as f64
        })
        .collect();
    SampleVector::new(avgs).expect("averages of positive entries are positive")
}

/// `n·M(s, s/2, …, s/n) − Σ_k M(x_1, …, x_k)` with `s = x_1 + … + x_n`.
/// Meaningful for increasing means.
pub fn check_dominated_kedlaya(expr: &MeanExpr, x: &SampleVector) -> Result<f64> {
    let n = x.len();
    let s: f64 = x.iter().sum();
    let v = SampleVector::new((1..=n).map(|k| s / k as f64).collect())?;
    let rhs = n as f64 * expr.evaluate(&v)?;
    let lhs: f64 = prefix_means(expr, x)?.iter().sum();
    Ok(rhs - lhs)
}

/// Both sides of the averaging argument on the substituted matrix: the
/// arithmetic average of `M` over the columns, and `M` of the row averages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reenactment {
    pub column_side: f64,
    pub row_side: f64,
}

impl Reenactment {
    pub fn margin(&self) -> f64 {
        self.row_side - self.column_side
    }
}

/// Replaces each symbol `k` by `x_k` and evaluates both sides; `x.len()` in `2..=6`.
pub fn kedlaya_reenactment(expr: &MeanExpr, x: &SampleVector) -> Result<Reenactment> {
    let a = kedlaya_matrix(x.len())?;
    let size = a.size();
    let sub = |v: u8| x[v as usize - 1];
    let mut col_sum = 0.0;
    for c in 0..size {
        let col = SampleVector::new((0..size).map(|r| sub(a.get(r, c))).collect())?;
        col_sum += expr.evaluate(&col)?;
    }
    let row_avgs = a
        .rows()
        .map(|row| row.iter().map(|&v| sub(v)).sum::<f64>() / size as f64)
        .collect();
    Ok(Reenactment {
        column_side: col_sum / size as f64,
        row_side: expr.evaluate(&SampleVector::new(row_avgs)?)?,
    })
}
