use std::fmt;

use crate::{Error, Result};

/// Widths `σ_1, σ_2, …` of the per-mode disks.
#[derive(Clone, Debug, PartialEq)]
pub enum SigmaSequence {
    /// `σ_k = 2^{-k}`.
    Pow2,
    /// `σ_k = a·r^{k-1}`.
    Geometric { a: f64, r: f64 },
    /// `σ_k = c·k^{-p}`.
    PowerLaw { c: f64, p: f64 },
    /// Finite list; no tail rule.
    Explicit(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaReport {
    /// `Σ_{k≤K} √k σ_k` for `K = 1, 2, …`.
    pub partial_sums: Vec<f64>,
    pub verdict: Verdict,
}

impl SigmaSequence {
    /// `sigma = pow2 | list:a,b,… | geometric:a,r | power:c,p`.
    pub fn parse(text: &str) -> Result<SigmaSequence> {
        let t = text.trim();
        let nums = |s: &str| -> Result<Vec<f64>> {
            s.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number '{}' in sigma rule", x.trim())))
                })
                .collect()
        };
        let seq = if t == "pow2" {
            SigmaSequence::Pow2
        } else if let Some(rest) = t.strip_prefix("list:") {
            SigmaSequence::Explicit(nums(rest)?)
        } else if let Some(rest) = t.strip_prefix("geometric:") {
            match nums(rest)?[..] {
                [a, r] => SigmaSequence::Geometric { a, r },
                _ => return Err(Error::Parse("geometric needs a,r".into())),
            }
        } else if let Some(rest) = t.strip_prefix("power:") {
            match nums(rest)?[..] {
                [c, p] => SigmaSequence::PowerLaw { c, p },
                _ => return Err(Error::Parse("power needs c,p".into())),
            }
        } else {
            return Err(Error::Parse(format!("unknown sigma rule '{t}'")));
        };
        seq.validate()?;
        Ok(seq)
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            SigmaSequence::Pow2 => true,
            SigmaSequence::Geometric { a, r } => *a > 0.0 && *r > 0.0,
            SigmaSequence::PowerLaw { c, p } => *c > 0.0 && p.is_finite(),
            SigmaSequence::Explicit(v) => !v.is_empty() && v.iter().all(|s| *s > 0.0 && s.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("sigma values must be positive: {self}")))
        }
    }

    /// `σ_k` for `k ≥ 1`; `None` past the end of an explicit list.
    pub fn get(&self, k: usize) -> Option<f64> {
        if k == 0 {
            return None;
        }
        match self {
            SigmaSequence::Pow2 => Some(0.5f64.powi(k as i32)),
            SigmaSequence::Geometric { a, r } => Some(a * r.powi(k as i32 - 1)),
            SigmaSequence::PowerLaw { c, p } => Some(c * (k as f64).powf(-p)),
            SigmaSequence::Explicit(v) => v.get(k - 1).copied(),
        }
    }

    pub fn has_rule(&self) -> bool {
        !matches!(self, SigmaSequence::Explicit(_))
    }

    fn verdict(&self) -> Verdict {
        match self {
            SigmaSequence::Pow2 => Verdict::Convergent,
            SigmaSequence::Geometric { r, .. } if *r < 1.0 => Verdict::Convergent,
            SigmaSequence::Geometric { .. } => Verdict::Divergent,
            // terms c·k^{1/2-p}
            SigmaSequence::PowerLaw { p, .. } if *p > 1.5 => Verdict::Convergent,
            SigmaSequence::PowerLaw { .. } => Verdict::Divergent,
            SigmaSequence::Explicit(_) => Verdict::Inconclusive,
        }
    }
}

impl fmt::Display for SigmaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaSequence::Pow2 => write!(f, "pow2"),
            SigmaSequence::Geometric { a, r } => write!(f, "geometric:{a},{r}"),
            SigmaSequence::PowerLaw { c, p } => write!(f, "power:{c},{p}"),
            SigmaSequence::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "list:{}", parts.join(","))
            }
        }
    }
}

/// Partial sums of `Σ √k σ_k` up to `horizon` (or the list length) and a
/// verdict from the rule: geometric dominance or p-series comparison.
pub fn check_sigma_condition(seq: &SigmaSequence, horizon: usize) -> SigmaReport {
    let mut acc = 0.0;
    let mut partial_sums = Vec::new();
    for k in 1..=horizon {
        let Some(s) = seq.get(k) else { break };
        acc += (k as f64).sqrt() * s;
        partial_sums.push(acc);
    }
    SigmaReport {
        partial_sums,
        verdict: seq.verdict(),
    }
}

/// `Σ_{n>M} 2√(2n) σ_n`, summed until the increment drops below 1e-15;
/// power laws switch to the integral remainder after 10⁶ terms.
pub fn tail_bound(m: usize, seq: &SigmaSequence) -> Result<f64> {
    match seq.verdict() {
        Verdict::Divergent => return Err(Error::Divergent(format!("Σ√k σ_k diverges for {seq}"))),
        Verdict::Inconclusive => return Err(Error::NoAnalyticRule),
        Verdict::Convergent => {}
    }
    let term = |n: usize| 2.0 * (2.0 * n as f64).sqrt() * seq.get(n).unwrap_or(0.0);
    let mut total = 0.0;
    let mut n = m + 1;
    loop {
        let t = term(n);
        total += t;
        if t < 1e-15 {
            break;
        }
        if n >= m + 1_000_000 {
            if let SigmaSequence::PowerLaw { c, p } = seq {
                // ∫_{n+½}^∞ 2√2 c x^{1/2-p} dx
                let e = p - 1.5;
                total += 2.0 * 2f64.sqrt() * c * (n as f64 + 0.5).powf(-e) / e;
            }
            break;
        }
        n += 1;
    }
    Ok(total)
}
