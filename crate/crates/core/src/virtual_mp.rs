//! Elements of `Z^s`, virtual multipartitions, affine reflections and the
//! linkage order.
//!
//! An element `A = (a_1, ..., a_m)` is strictly decreasing inside each block
//! of sizes `s_1, ..., s_ℓ`. Subtracting `A_∅ = (s_1, ..., 1, s_2, ..., 1, ...)`
//! gives the right ends of the rows of ℓ virtual Young diagrams.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::multipartition::{Multicharge, Multipartition};
use crate::order::{keys_preceq, BoxKey};

/// Block sizes `s_i ≥ 0` for `Z^s`.
fn block_sizes(ctx: &Multicharge) -> Result<Vec<usize>> {
    ctx.charges()
        .iter()
        .map(|&s| usize::try_from(s).map_err(|_| FockError::InvalidZs(format!("charges must be non-negative, got {s}"))))
        .collect()
}

fn block_ranges(sizes: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&n| {
            let r = start..start + n;
            start += n;
            r
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZsElement {
    a: Vec<i64>,
}

impl ZsElement {
    pub fn new(a: Vec<i64>, ctx: &Multicharge) -> Result<Self> {
        let sizes = block_sizes(ctx)?;
        if a.len() != sizes.iter().sum::<usize>() {
            return Err(FockError::InvalidZs(format!(
                "expected {} entries, got {}",
                sizes.iter().sum::<usize>(),
                a.len()
            )));
        }
        for r in block_ranges(&sizes) {
            if a[r].windows(2).any(|w| w[0] <= w[1]) {
                return Err(FockError::InvalidZs(format!("{a:?} is not strictly decreasing inside its blocks")));
            }
        }
        Ok(ZsElement { a })
    }

    pub fn entries(&self) -> &[i64] {
        &self.a
    }

    /// Multiset of residues `a_k mod e`, sorted.
    pub fn residue_multiset(&self, e: i64) -> Vec<i64> {
        let mut r: Vec<i64> = self.a.iter().map(|x| x.rem_euclid(e)).collect();
        r.sort_unstable();
        r
    }
}

/// Wire form `{"s":[1,1],"e":2,"a":[3,0]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZsJson {
    pub s: Vec<i64>,
    pub e: i64,
    pub a: Vec<i64>,
}

impl ZsJson {
    pub fn decode(self) -> Result<(ZsElement, Multicharge)> {
        let ctx = Multicharge::new(self.e, self.s)?;
        let z = ZsElement::new(self.a, &ctx)?;
        Ok((z, ctx))
    }

    pub fn encode(z: &ZsElement, ctx: &Multicharge) -> ZsJson {
        ZsJson {
            s: ctx.charges().to_vec(),
            e: ctx.e(),
            a: z.a.clone(),
        }
    }
}

/// `A_∅`; every charge must be positive.
pub fn a_empty(ctx: &Multicharge) -> Result<ZsElement> {
    if let Some(&bad) = ctx.charges().iter().find(|&&s| s <= 0) {
        return Err(FockError::InvalidZs(format!("A_∅ needs all charges ≥ 1, got {bad}")));
    }
    let a = ctx.charges().iter().flat_map(|&s| (1..=s).rev()).collect();
    Ok(ZsElement { a })
}

fn baseline(sizes: &[usize]) -> Vec<i64> {
    sizes.iter().flat_map(|&s| (1..=s as i64).rev()).collect()
}

/// ℓ virtual Young diagrams; component `i` has exactly `s_i` rows, each
/// recorded by the column of its rightmost box (any integer).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VirtualMultipartition {
    pub rows: Vec<Vec<i64>>,
}

pub fn to_virtual(z: &ZsElement, ctx: &Multicharge) -> Result<VirtualMultipartition> {
    let sizes = block_sizes(ctx)?;
    if z.a.len() != sizes.iter().sum::<usize>() {
        return Err(FockError::InvalidZs("element does not match the multicharge".into()));
    }
    let base = baseline(&sizes);
    let rows = block_ranges(&sizes)
        .into_iter()
        .map(|r| r.map(|k| z.a[k] - base[k]).collect())
        .collect();
    Ok(VirtualMultipartition { rows })
}

pub fn from_virtual(v: &VirtualMultipartition, ctx: &Multicharge) -> Result<ZsElement> {
    let sizes = block_sizes(ctx)?;
    if v.rows.len() != sizes.len() || v.rows.iter().zip(&sizes).any(|(r, &n)| r.len() != n) {
        return Err(FockError::InvalidZs("row counts do not match the multicharge".into()));
    }
    if v.rows.iter().any(|r| r.windows(2).any(|w| w[0] < w[1])) {
        return Err(FockError::InvalidZs("virtual rows must be weakly decreasing".into()));
    }
    let base = baseline(&sizes);
    let a = v.rows.iter().flatten().zip(&base).map(|(r, b)| r + b).collect();
    Ok(ZsElement { a })
}

/// A real root `ε_i - ε_j + nδ` (1-based `i ≠ j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
    pub n: i64,
}

impl Root {
    /// `n ≥ 0` if `i < j`, `n > 0` if `i > j`.
    pub fn is_positive(&self) -> bool {
        self.i != self.j && (if self.i < self.j { self.n >= 0 } else { self.n > 0 })
    }
}

/// `σ_β (a_1, ..., a_m)`: `a_i ← a_j + en`, `a_j ← a_i - en`.
pub fn reflect(a: &[i64], beta: Root, e: i64) -> Vec<i64> {
    assert!(beta.i != beta.j && beta.i >= 1 && beta.j >= 1 && beta.i <= a.len() && beta.j <= a.len());
    let (i, j) = (beta.i - 1, beta.j - 1);
    let mut out = a.to_vec();
    out[i] = a[j] + e * beta.n;
    out[j] = a[i] - e * beta.n;
    out
}

/// Sorts each block decreasingly; `None` if some block has a repeat.
pub fn plus_sort(a: &[i64], ctx: &Multicharge) -> Result<Option<ZsElement>> {
    let sizes = block_sizes(ctx)?;
    if a.len() != sizes.iter().sum::<usize>() {
        return Err(FockError::InvalidZs("length does not match the multicharge".into()));
    }
    let mut out = a.to_vec();
    for r in block_ranges(&sizes) {
        let block = &mut out[r];
        block.sort_unstable_by(|x, y| y.cmp(x));
        if block.windows(2).any(|w| w[0] == w[1]) {
            return Ok(None);
        }
    }
    Ok(Some(ZsElement { a: out }))
}

/// Weight `α_A = Σ a_k ε_k - eω₀ + (Σ a_k²)/(2e) δ`, all coefficients
/// stored as numerators over the common denominator `2e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub denom: i64,
    pub eps: Vec<i64>,
    pub w0: i64,
    pub delta: i64,
}

impl WeightVector {
    pub fn of(a: &[i64], e: i64) -> Self {
        let denom = 2 * e;
        WeightVector {
            denom,
            eps: a.iter().map(|x| x * denom).collect(),
            w0: -e * denom,
            delta: a.iter().map(|x| x * x).sum(),
        }
    }

    pub fn sub(&self, other: &WeightVector) -> WeightVector {
        assert_eq!(self.denom, other.denom);
        WeightVector {
            denom: self.denom,
            eps: self.eps.iter().zip(&other.eps).map(|(x, y)| x - y).collect(),
            w0: self.w0 - other.w0,
            delta: self.delta - other.delta,
        }
    }

    /// Coordinates `(c_0, c_1, ..., c_{m-1})` in the simple roots
    /// `α_0 = ε_m - ε_1 + δ`, `α_k = ε_k - ε_{k+1}`, if the vector lies in
    /// their integer span.
    pub fn simple_root_coordinates(&self) -> Option<Vec<i64>> {
        let m = self.eps.len();
        if self.w0 != 0 || self.delta % self.denom != 0 || self.eps.iter().any(|x| x % self.denom != 0) {
            return None;
        }
        let eps: Vec<i64> = self.eps.iter().map(|x| x / self.denom).collect();
        if eps.iter().sum::<i64>() != 0 {
            return None;
        }
        let c0 = self.delta / self.denom;
        if m == 0 {
            return (c0 == 0).then(|| vec![c0]);
        }
        let mut coords = vec![c0];
        let mut acc = c0;
        for x in &eps[..m - 1] {
            acc += x;
            coords.push(acc);
        }
        // ε_m coefficient is c_0 - c_{m-1}
        (c0 - acc == eps[m - 1]).then_some(coords)
    }
}

/// `A' = (σ_β A)_+` when it exists and lies strictly below `A`:
/// `α_A - α_{A'}` has non-negative integral simple-root coordinates, not all
/// zero.
pub fn descent_step(z: &ZsElement, beta: Root, ctx: &Multicharge) -> Result<Option<ZsElement>> {
    if !beta.is_positive() {
        return Err(FockError::Precondition(format!("{beta:?} is not a positive real root")));
    }
    let m = z.a.len();
    if beta.i > m || beta.j > m {
        return Err(FockError::Precondition(format!("{beta:?} out of range for m = {m}")));
    }
    let reflected = reflect(&z.a, beta, ctx.e());
    let Some(next) = plus_sort(&reflected, ctx)? else {
        return Ok(None);
    };
    let diff = WeightVector::of(&z.a, ctx.e()).sub(&WeightVector::of(&next.a, ctx.e()));
    let lower = diff
        .simple_root_coordinates()
        .is_some_and(|c| c.iter().all(|&x| x >= 0) && c.iter().any(|&x| x > 0));
    Ok(lower.then_some(next))
}

/// Search bounds for the linkage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageWindow {
    pub max_chain: usize,
    pub max_n: i64,
}

impl LinkageWindow {
    /// Chain length ≤ 8 and `|n| ≤ spread(A)/e + 1`.
    pub fn default_for(z: &ZsElement, e: i64) -> Self {
        let spread = match (z.a.iter().max(), z.a.iter().min()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0,
        };
        LinkageWindow {
            max_chain: 8,
            max_n: spread / e + 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkageVerdict {
    Below,
    Equal,
    /// Residue multisets differ: never comparable.
    Unrelated,
    UnknownWithinWindow,
}

fn positive_roots(m: usize, max_n: i64) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 1..=m {
            if i == j {
                continue;
            }
            for n in -max_n..=max_n {
                let r = Root { i, j, n };
                if r.is_positive() {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Decides `lower < upper` by breadth-first search over descent chains
/// starting at `upper`.
pub fn linkage_verdict(lower: &ZsElement, upper: &ZsElement, ctx: &Multicharge, window: LinkageWindow) -> Result<LinkageVerdict> {
    if lower == upper {
        return Ok(LinkageVerdict::Equal);
    }
    if lower.residue_multiset(ctx.e()) != upper.residue_multiset(ctx.e()) {
        return Ok(LinkageVerdict::Unrelated);
    }
    let roots = positive_roots(upper.a.len(), window.max_n);
    let mut seen: HashSet<ZsElement> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(upper.clone());
    queue.push_back((upper.clone(), 0usize));
    while let Some((cur, depth)) = queue.pop_front() {
        if depth == window.max_chain {
            continue;
        }
        for &beta in &roots {
            if let Some(next) = descent_step(&cur, beta, ctx)? {
                if &next == lower {
                    return Ok(LinkageVerdict::Below);
                }
                if seen.insert(next.clone()) {
                    queue.push_back((next, depth + 1));
                }
            }
        }
    }
    Ok(LinkageVerdict::UnknownWithinWindow)
}

/// `lower < upper` within the window.
pub fn linkage_lt(lower: &ZsElement, upper: &ZsElement, ctx: &Multicharge, window: LinkageWindow) -> Result<bool> {
    Ok(linkage_verdict(lower, upper, ctx, window)? == LinkageVerdict::Below)
}

/// Positive columns are those of `λ`; columns `≤ 0` are full. Needs
/// `|λ| ≤ n < s_i` for every `i`.
pub fn truncation_embed(lambda: &Multipartition, ctx: &Multicharge, n: usize) -> Result<ZsElement> {
    lambda.check_level(ctx)?;
    if lambda.size() > n {
        return Err(FockError::Precondition(format!("|λ| = {} exceeds n = {n}", lambda.size())));
    }
    if let Some(&s) = ctx.charges().iter().find(|&&s| s <= n as i64) {
        return Err(FockError::Precondition(format!("truncation needs n < s_i, got n = {n}, s_i = {s}")));
    }
    let rows = ctx
        .charges()
        .iter()
        .zip(lambda.components())
        .map(|(&s, p)| (1..=s as usize).map(|r| p.row(r) as i64).collect())
        .collect();
    from_virtual(&VirtualMultipartition { rows }, ctx)
}

/// Boxes present in `v` but not in `w`, as order keys.
fn excess_keys(v: &VirtualMultipartition, w: &VirtualMultipartition, ctx: &Multicharge) -> Vec<BoxKey> {
    let mut out = Vec::new();
    for (k, (rv, rw)) in v.rows.iter().zip(&w.rows).enumerate() {
        let s = ctx.charges()[k];
        for (x, (&a, &b)) in rv.iter().zip(rw).enumerate() {
            let row = x as i64 + 1;
            for col in b + 1..=a {
                let c = col - row + s;
                out.push((ctx.residue(c), c, k));
            }
        }
    }
    out
}

/// `V ⪯ V'`: the common part is matched to itself, the finite symmetric
/// difference must admit a matching.
pub fn virtual_preceq(v: &VirtualMultipartition, w: &VirtualMultipartition, ctx: &Multicharge) -> Result<bool> {
    if v.rows.len() != w.rows.len() || v.rows.iter().zip(&w.rows).any(|(a, b)| a.len() != b.len()) {
        return Err(FockError::Precondition("virtual multipartitions have different row counts".into()));
    }
    Ok(keys_preceq(excess_keys(v, w, ctx), excess_keys(w, v, ctx)))
}

/// Count of boxes per `(content, component)` diagonal in the finite
/// difference `v \ w`; used by reports.
pub fn difference_profile(v: &VirtualMultipartition, w: &VirtualMultipartition, ctx: &Multicharge) -> BTreeMap<(i64, usize), usize> {
    let mut out = BTreeMap::new();
    for (_, c, k) in excess_keys(v, w, ctx) {
        *out.entry((c, k)).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(e: i64, s: &[i64]) -> Multicharge {
        Multicharge::new(e, s.to_vec()).unwrap()
    }

    #[test]
    fn a_empty_examples() {
        assert_eq!(a_empty(&ctx(2, &[1, 1])).unwrap().entries(), &[1, 1]);
        assert_eq!(a_empty(&ctx(2, &[3])).unwrap().entries(), &[3, 2, 1]);
        assert_eq!(a_empty(&ctx(2, &[2, 1])).unwrap().entries(), &[2, 1, 1]);
        assert!(a_empty(&ctx(2, &[0, 1])).is_err());
    }

    #[test]
    fn virtual_views() {
        let c = ctx(2, &[1, 1]);
        let v0 = to_virtual(&a_empty(&c).unwrap(), &c).unwrap();
        assert_eq!(v0.rows, vec![vec![0], vec![0]]);
        let z = ZsElement::new(vec![3, 0], &c).unwrap();
        let v = to_virtual(&z, &c).unwrap();
        assert_eq!(v.rows, vec![vec![2], vec![-1]]);
        assert_eq!(from_virtual(&v, &c).unwrap(), z);
        let bad = VirtualMultipartition { rows: vec![vec![0, 1]] };
        assert!(from_virtual(&bad, &ctx(2, &[2])).is_err());
    }

    #[test]
    fn reflections() {
        assert_eq!(reflect(&[3, 0], Root { i: 1, j: 2, n: 1 }, 2), vec![2, 1]);
        assert_eq!(reflect(&[2, 2], Root { i: 1, j: 2, n: 0 }, 3), vec![2, 2]);
        let a = [5, -1, 7];
        let b = Root { i: 3, j: 1, n: 2 };
        assert_eq!(reflect(&reflect(&a, b, 3), b, 3), a.to_vec());
    }

    #[test]
    fn plus_sort_cases() {
        let c = ctx(2, &[2]);
        assert_eq!(plus_sort(&[3, 1], &c).unwrap().unwrap().entries(), &[3, 1]);
        assert_eq!(plus_sort(&[1, 3], &c).unwrap().unwrap().entries(), &[3, 1]);
        assert_eq!(plus_sort(&[2, 2], &c).unwrap(), None);
    }

    #[test]
    fn descent_examples() {
        let c = ctx(2, &[1, 1]);
        let z = ZsElement::new(vec![3, 0], &c).unwrap();
        let d = descent_step(&z, Root { i: 1, j: 2, n: 1 }, &c).unwrap();
        assert_eq!(d.unwrap().entries(), &[2, 1]);
        // a_i - a_j - ne = 3 - 0 - 4 < 0
        assert_eq!(descent_step(&z, Root { i: 1, j: 2, n: 2 }, &c).unwrap(), None);
        assert!(descent_step(&z, Root { i: 2, j: 1, n: 0 }, &c).is_err());
    }

    #[test]
    fn linkage_examples() {
        let c = ctx(2, &[1, 1]);
        let hi = ZsElement::new(vec![3, 0], &c).unwrap();
        let lo = ZsElement::new(vec![2, 1], &c).unwrap();
        let w = LinkageWindow::default_for(&hi, 2);
        assert!(linkage_lt(&lo, &hi, &c, w).unwrap());
        assert!(!linkage_lt(&hi, &hi, &c, w).unwrap());
        let other = ZsElement::new(vec![2, 0], &c).unwrap();
        assert_eq!(linkage_verdict(&other, &hi, &c, w).unwrap(), LinkageVerdict::Unrelated);
    }

    #[test]
    fn truncation_examples() {
        let c = ctx(2, &[3]);
        assert_eq!(truncation_embed(&"-".parse().unwrap(), &c, 1).unwrap(), a_empty(&c).unwrap());
        assert_eq!(truncation_embed(&"1".parse().unwrap(), &c, 1).unwrap().entries(), &[4, 2, 1]);
        let c = ctx(2, &[2, 2]);
        assert_eq!(truncation_embed(&"1|-".parse().unwrap(), &c, 1).unwrap().entries(), &[3, 1, 2, 1]);
        assert!(truncation_embed(&"1|-".parse().unwrap(), &c, 2).is_err());
    }

    #[test]
    fn virtual_order_examples() {
        let c = ctx(2, &[1, 1]);
        let lo = to_virtual(&ZsElement::new(vec![2, 1], &c).unwrap(), &c).unwrap();
        let hi = to_virtual(&ZsElement::new(vec![3, 0], &c).unwrap(), &c).unwrap();
        assert!(virtual_preceq(&lo, &hi, &c).unwrap());
        assert!(!virtual_preceq(&hi, &lo, &c).unwrap());
        assert!(virtual_preceq(&hi, &hi, &c).unwrap());
        let other = VirtualMultipartition {
            rows: vec![vec![0, 0], vec![0]],
        };
        assert!(virtual_preceq(&lo, &other, &c).is_err());
    }
}
