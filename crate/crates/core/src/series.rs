//! Summation helpers: compensated accumulation, alternating-series
//! acceleration and Richardson extrapolation of slowly converging sums.

/// Catalan's constant `G = Σ (-1)^j / (2j+1)²`.
#[allow(clippy::excessive_precision)]
pub const CATALAN: f64 = 0.915_965_594_177_219_015_05;

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Sums `Σ_{k>=0} (-1)^k a(k)` with the Cohen–Villegas–Zagier acceleration.
///
/// `a` must be positive and completely monotone in `k` (true for `1/(k+1)`,
/// `1/(2k+1)^p` and similar). The error falls like `5.83^-terms`.
pub fn alternating_sum<F>(a: F, terms: usize) -> f64
where
    F: Fn(usize) -> f64,
{
    let n = terms as f64;
    let mut d = (3.0 + 8.0f64.sqrt()).powf(n);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for k in 0..terms {
        c = b - c;
        s += c * a(k);
        let kf = k as f64;
        b *= (kf + n) * (kf - n) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

/// Partial sum `Σ_{k=start}^{end} f(k)` accumulated with compensation.
pub fn partial_sum<F>(f: F, start: i64, end: i64) -> f64
where
    F: Fn(i64) -> f64,
{
    (start..=end).map(f).collect::<CompensatedSum>().value()
}

/// Limit of `Σ_{k=1}^{N} f(k)` as `N → ∞` for sums whose remainder has an
/// asymptotic expansion in integer powers of `1/N`.
///
/// Partial sums at `N = base, 2·base, …, 2^(levels-1)·base` are combined in a
/// Richardson table.
pub fn richardson_sum<F>(f: F, base: usize, levels: usize) -> f64
where
    F: Fn(i64) -> f64,
{
    assert!(base >= 1 && levels >= 1);
    let mut acc = CompensatedSum::new();
    let mut reached = 0i64;
    let mut table: Vec<f64> = Vec::with_capacity(levels);
    for level in 0..levels {
        let upto = (base << level) as i64;
        for k in reached + 1..=upto {
            acc.add(f(k));
        }
        reached = upto;
        let mut row = vec![acc.value()];
        for j in 1..=level {
            let factor = 2f64.powi(j as i32);
            let next = (factor * row[j - 1] - table[j - 1]) / (factor - 1.0);
            row.push(next);
        }
        table = row;
    }
    *table.last().expect("levels >= 1")
}
