use std::fmt;

use crate::{Error, Result};

/// `Z_{n_1} × … × Z_{n_r}`; elements are indexed in mixed radix with the
/// first component most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    moduli: Vec<u32>,
}

impl FiniteAbelianGroup {
    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if moduli.is_empty() || moduli.iter().any(|&n| n == 0) {
            return Err(Error::Invalid(format!("group moduli must be ≥ 1, got {moduli:?}")));
        }
        Ok(FiniteAbelianGroup { moduli })
    }

    pub fn cyclic(n: u32) -> Self {
        FiniteAbelianGroup::new(vec![n]).expect("n ≥ 1")
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&n| n as usize).product()
    }

    pub fn element(&self, mut i: usize) -> Vec<u32> {
        let mut out = vec![0; self.moduli.len()];
        for (slot, &n) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (i % n as usize) as u32;
            i /= n as usize;
        }
        out
    }

    pub fn index(&self, comps: &[u32]) -> usize {
        comps
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + (c % n) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.element(a), self.element(b));
        let s: Vec<u32> = x.iter().zip(&y).zip(&self.moduli).map(|((p, q), n)| (p + q) % n).collect();
        self.index(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let x = self.element(a);
        let s: Vec<u32> = x.iter().zip(&self.moduli).map(|(p, n)| (n - p) % n).collect();
        self.index(&s)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Direct product `self × other`.
    pub fn product(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        let mut m = self.moduli.clone();
        m.extend_from_slice(&other.moduli);
        FiniteAbelianGroup { moduli: m }
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z{n}")).collect();
        f.write_str(&parts.join("×"))
    }
}

/// μ_m-valued 2-cocycle stored as exponents: `τ(g,h) = ω^{e(g,h)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    group: FiniteAbelianGroup,
    m: u32,
    table: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `τ(e,g) ≠ 1` or `τ(g,e) ≠ 1`.
    Normalization { g: usize },
    /// `τ(g,h)τ(gh,k) ≠ τ(h,k)τ(g,hk)`.
    Identity { g: usize, h: usize, k: usize },
}

impl Cocycle {
    pub fn from_table(group: FiniteAbelianGroup, m: u32, table: Vec<u32>) -> Result<Self> {
        let n = group.order();
        if m == 0 {
            return Err(Error::InvalidCocycle("root order must be ≥ 1".into()));
        }
        if table.len() != n * n {
            return Err(Error::IncompleteTable(format!("{} entries for a group of order {n}", table.len())));
        }
        let table = table.into_iter().map(|e| e % m).collect();
        Ok(Cocycle { group, m, table })
    }

    pub fn trivial(group: FiniteAbelianGroup, m: u32) -> Self {
        let n = group.order();
        Cocycle::from_table(group, m.max(1), vec![0; n * n]).expect("table has n² entries")
    }

    /// `e(g,h) = Σ_ij B_ij g_i h_j (mod m)` on component representatives.
    pub fn bilinear(group: FiniteAbelianGroup, m: u32, form: &[Vec<i64>]) -> Result<Self> {
        let r = group.rank();
        if form.len() != r || form.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidCocycle(format!("bilinear form must be {r}x{r}")));
        }
        let n = group.order();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            let x = group.element(a);
            for b in 0..n {
                let y = group.element(b);
                let mut e = 0i64;
                for i in 0..r {
                    for j in 0..r {
                        e += form[i][j] * x[i] as i64 * y[j] as i64;
                    }
                }
                table.push(e.rem_euclid(m as i64) as u32);
            }
        }
        Cocycle::from_table(group, m, table)
    }

    /// `τ((a,b),(c,d)) = ω^{bc}` on a rank-2 group, `m = gcd(n_1, n_2)`.
    pub fn heisenberg(group: FiniteAbelianGroup) -> Result<Self> {
        if group.rank() != 2 {
            return Err(Error::InvalidCocycle("heisenberg cocycle needs a rank-2 group".into()));
        }
        let (mut a, mut b) = (group.moduli()[0], group.moduli()[1]);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        let m = a;
        Cocycle::bilinear(group, m, &[vec![0, 0], vec![1, 0]])
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn root_order(&self) -> u32 {
        self.m
    }

    pub fn exponent(&self, g: usize, h: usize) -> u32 {
        self.table[g * self.group.order() + h]
    }

    pub fn set_exponent(&mut self, g: usize, h: usize, e: u32) {
        let n = self.group.order();
        self.table[g * n + h] = e % self.m;
    }

    /// `e(g,h) − e(h,g)`: the commutator phase exponent.
    pub fn commutator_exponent(&self, g: usize, h: usize) -> u32 {
        (self.exponent(g, h) + self.m - self.exponent(h, g)) % self.m
    }

    /// Elements whose commutator phase with every element is trivial.
    pub fn regular_elements(&self) -> Vec<usize> {
        let n = self.group.order();
        (0..n)
            .filter(|&g| (0..n).all(|h| self.commutator_exponent(g, h) == 0))
            .collect()
    }
}

/// Exhaustive check of normalization and the cocycle identity, in exact
/// exponent arithmetic.
pub fn check_cocycle(tau: &Cocycle) -> Vec<Violation> {
    let g = &tau.group;
    let n = g.order();
    let m = tau.m;
    let mut out = Vec::new();
    for a in 0..n {
        if tau.exponent(0, a) != 0 || tau.exponent(a, 0) != 0 {
            out.push(Violation::Normalization { g: a });
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = g.add(a, b);
            for c in 0..n {
                let lhs = (tau.exponent(a, b) + tau.exponent(ab, c)) % m;
                let rhs = (tau.exponent(b, c) + tau.exponent(a, g.add(b, c))) % m;
                if lhs != rhs {
                    out.push(Violation::Identity { g: a, h: b, k: c });
                }
            }
        }
    }
    out
}

/// Central extension `G^τ = G × μ_m` with
/// `(g,i)(h,j) = (g+h, i+j+e(g,h))`; index `g·m + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    cocycle: Cocycle,
}

impl Extension {
    pub fn new(cocycle: Cocycle) -> Result<Self> {
        let v = check_cocycle(&cocycle);
        if !v.is_empty() {
            return Err(Error::InvalidCocycle(format!("{} violations, first {:?}", v.len(), v[0])));
        }
        Ok(Extension { cocycle })
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.cocycle.group
    }

    pub fn m(&self) -> u32 {
        self.cocycle.m
    }

    pub fn order(&self) -> usize {
        self.group().order() * self.m() as usize
    }

    pub fn index(&self, g: usize, phase: u32) -> usize {
        g * self.m() as usize + (phase % self.m()) as usize
    }

    /// `(base, phase exponent)`.
    pub fn split(&self, x: usize) -> (usize, u32) {
        let m = self.m() as usize;
        (x / m, (x % m) as u32)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        let (g, i) = self.split(x);
        let (h, j) = self.split(y);
        let e = self.cocycle.exponent(g, h);
        self.index(self.group().add(g, h), i + j + e)
    }

    pub fn inv(&self, x: usize) -> usize {
        let (g, i) = self.split(x);
        let ng = self.group().neg(g);
        let m = self.m();
        let e = self.cocycle.exponent(g, ng);
        self.index(ng, (2 * m - i - e) % m)
    }

    pub fn table(&self) -> GroupTable {
        let n = self.order();
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                mul.push(self.mul(x, y));
            }
        }
        GroupTable {
            order: n,
            mul,
            inv: (0..n).map(|x| self.inv(x)).collect(),
            haar_den: self.m() as i64,
            quotient: (0..n).map(|x| self.split(x).0).collect(),
        }
    }
}

/// Multiplication table of a finite group with a normalized Haar weight
/// `1/haar_den` per element, and a projection onto a quotient (used for
/// actions that factor through it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    pub order: usize,
    pub mul: Vec<usize>,
    pub inv: Vec<usize>,
    pub haar_den: i64,
    pub quotient: Vec<usize>,
}

impl GroupTable {
    pub fn of_group(g: &FiniteAbelianGroup) -> GroupTable {
        let n = g.order();
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                mul.push(g.add(x, y));
            }
        }
        GroupTable {
            order: n,
            mul,
            inv: (0..n).map(|x| g.neg(x)).collect(),
            haar_den: 1,
            quotient: (0..n).collect(),
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }
}

/// Parse `group = 3x3`, `cocycle = heisenberg|trivial|bilinear:a,b;c,d`,
/// `root_order = 3` (lines, `#` comments).
pub fn parse_group_spec(text: &str) -> Result<Cocycle> {
    let mut group = None;
    let mut cocycle = None;
    let mut root = None;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", no + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "group" => {
                let moduli = v
                    .split('x')
                    .map(|p| p.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Parse(format!("line {}: bad group '{v}'", no + 1)))?;
                group = Some(FiniteAbelianGroup::new(moduli)?);
            }
            "cocycle" => cocycle = Some(v.to_string()),
            "root_order" => {
                root = Some(
                    v.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("line {}: bad root_order '{v}'", no + 1)))?,
                )
            }
            other => return Err(Error::Parse(format!("line {}: unknown key '{other}'", no + 1))),
        }
    }
    let group = group.ok_or_else(|| Error::Parse("missing key 'group'".into()))?;
    let kind = cocycle.unwrap_or_else(|| "trivial".into());
    let tau = match kind.as_str() {
        "trivial" => Cocycle::trivial(group, root.unwrap_or(1)),
        "heisenberg" => {
            let t = Cocycle::heisenberg(group.clone())?;
            match root {
                Some(m) if m != t.root_order() => {
                    let form = [vec![0, 0], vec![1, 0]];
                    Cocycle::bilinear(group, m, &form)?
                }
                _ => t,
            }
        }
        s if s.starts_with("bilinear:") => {
            let rows = s["bilinear:".len()..]
                .split(';')
                .map(|r| {
                    r.split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad bilinear form '{s}'")))?;
            let m = root.ok_or_else(|| Error::Parse("bilinear cocycle needs root_order".into()))?;
            Cocycle::bilinear(group, m, &rows)?
        }
        other => return Err(Error::Parse(format!("unknown cocycle '{other}'"))),
    };
    Ok(tau)
}
