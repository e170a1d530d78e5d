//! Truncated Taylor series arithmetic, used to get exact high-order
//! derivatives of the closed-form solutions without hand-expanding them.
//!
//! Coefficient k stores f^(k)(x0)/k!. Elementary functions are propagated by
//! their defining ODEs, so the zeroth coefficient stays numerically stable
//! (tanh saturates instead of overflowing through exp).

#[derive(Clone, Debug)]
pub(crate) struct Taylor {
    pub c: Vec<f64>,
}

impl Taylor {
    /// The identity series centered at `x0`.
    pub fn var(x0: f64, n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[0] = x0;
        if n >= 1 {
            c[1] = 1.0;
        }
        Taylor { c }
    }

    fn len(&self) -> usize {
        self.c.len()
    }

    pub fn scale(&self, s: f64) -> Taylor {
        Taylor {
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    pub fn shift0(&self, v: f64) -> Taylor {
        let mut out = self.clone();
        out.c[0] += v;
        out
    }

    pub fn div(&self, other: &Taylor) -> Taylor {
        let n = self.len();
        let mut q = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.c[k];
            for j in 0..k {
                acc -= q[j] * other.c[k - j];
            }
            q[k] = acc / other.c[0];
        }
        Taylor { c: q }
    }

    /// exp of the series, via e' = e·s'.
    pub fn exp(&self) -> Taylor {
        let n = self.len();
        let mut e = vec![0.0; n];
        e[0] = self.c[0].exp();
        for k in 0..n - 1 {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += (j + 1) as f64 * self.c[j + 1] * e[k - j];
            }
            e[k + 1] = acc / (k + 1) as f64;
        }
        Taylor { c: e }
    }

    /// tanh of the series, via T' = (1 − T²)·s'.
    pub fn tanh(&self) -> Taylor {
        let n = self.len();
        let mut t = vec![0.0; n];
        t[0] = self.c[0].tanh();
        for k in 0..n - 1 {
            // ((1 − T²)·s')_k using coefficients of T available so far.
            let mut acc = (k + 1) as f64 * self.c[k + 1];
            for j in 0..=k {
                let mut t2 = 0.0;
                for m in 0..=j {
                    t2 += t[m] * t[j - m];
                }
                acc -= t2 * (k - j + 1) as f64 * self.c[k - j + 1];
            }
            t[k + 1] = acc / (k + 1) as f64;
        }
        Taylor { c: t }
    }

    /// (sin, cos) of the series, via the coupled recursion S' = C·s', C' = −S·s'.
    pub fn sin_cos(&self) -> (Taylor, Taylor) {
        let n = self.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 0..n - 1 {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 0..=k {
                let d = (k - j + 1) as f64 * self.c[k - j + 1];
                sa += c[j] * d;
                ca -= s[j] * d;
            }
            s[k + 1] = sa / (k + 1) as f64;
            c[k + 1] = ca / (k + 1) as f64;
        }
        (Taylor { c: s }, Taylor { c })
    }

    /// Derivatives f^(0..=order) recovered from the coefficients.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.c
            .iter()
            .enumerate()
            .map(|(k, &ck)| {
                if k > 0 {
                    fact *= k as f64;
                }
                ck * fact
            })
            .collect()
    }
}
