//! Combinatorial structure of a nonnegative matrix.
//!
//! Everything here looks only at the zero pattern: the support digraph has an
//! edge `i -> j` exactly when `a_ij > 0`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::matrix::NonnegativeMatrix;

/// Boolean matrix with bit-packed rows and saturating arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64);
        BoolMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub(crate) fn support(a: &NonnegativeMatrix) -> Self {
        let n = a.dim();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for (j, &v) in a.row(i).iter().enumerate() {
                if v > 0.0 {
                    m.set(i, j);
                }
            }
        }
        m
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn or_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i);
        }
        m
    }

    fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let mut out = Self::zeros(self.n);
        let w = self.words;
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    for t in 0..w {
                        out.bits[i * w + t] |= other.bits[k * w + t];
                    }
                }
            }
        }
        out
    }

    fn pow(&self, mut p: usize) -> BoolMatrix {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        while p > 0 {
            if p & 1 == 1 {
                result = result.mul(&base);
            }
            p >>= 1;
            if p > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    fn all_true(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j)))
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

/// Boolean test `(I + A)^(n-1) > 0`.
pub fn boolean_power_test(a: &NonnegativeMatrix) -> bool {
    let n = a.dim();
    BoolMatrix::support(a).or_identity().pow(n - 1).all_true()
}

/// Whether `A^n` vanishes on the support, i.e. `A` is nilpotent.
pub fn is_nilpotent(a: &NonnegativeMatrix) -> bool {
    BoolMatrix::support(a).pow(a.dim()).is_zero()
}

fn successors(a: &NonnegativeMatrix) -> Vec<Vec<usize>> {
    (0..a.dim())
        .map(|i| {
            a.row(i)
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0.0)
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

/// Strongly connected components in a topological order of the
/// condensation (edges only run from earlier to later components). Ties are
/// broken by smallest member index; members are sorted.
fn components_topological(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    // Iterative Tarjan.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }

    let mut members = vec![Vec::new(); ncomp];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }
    let mut indeg = vec![0usize; ncomp];
    let mut dag = vec![Vec::new(); ncomp];
    for (v, out) in succ.iter().enumerate() {
        for &w in out {
            let (cv, cw) = (comp[v], comp[w]);
            if cv != cw && !dag[cv].contains(&cw) {
                dag[cv].push(cw);
                indeg[cw] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..ncomp)
        .filter(|&c| indeg[c] == 0)
        .map(|c| Reverse((members[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(ncomp);
    while let Some(Reverse((_, c))) = heap.pop() {
        order.push(members[c].clone());
        for &d in &dag[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(Reverse((members[d][0], d)));
            }
        }
    }
    order
}

/// Outcome of the irreducibility test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    /// Whether the strong-connectivity verdict agrees with the boolean test
    /// `(I + A)^(n-1) > 0`.
    pub method_agreement: bool,
    /// Sizes of the supports of `(I + A)^m e_0` for `m = 0..n`.
    pub support_growth: Vec<usize>,
    /// For a reducible matrix: a nonempty proper index set with no support
    /// edge leaving it (the trailing diagonal block of the reducible form).
    pub witness: Vec<usize>,
}

pub fn is_irreducible(a: &NonnegativeMatrix) -> IrreducibilityReport {
    let n = a.dim();
    let succ = successors(a);
    let comps = components_topological(&succ);
    let irreducible = comps.len() == 1;
    let witness = if irreducible {
        Vec::new()
    } else {
        comps.last().cloned().unwrap_or_default()
    };

    let mut support = vec![false; n];
    support[0] = true;
    let mut growth = vec![1];
    for _ in 1..n {
        let next: Vec<bool> = (0..n)
            .map(|i| support[i] || succ[i].iter().any(|&j| support[j]))
            .collect();
        support = next;
        growth.push(support.iter().filter(|&&b| b).count());
    }

    IrreducibilityReport {
        irreducible,
        method_agreement: irreducible == boolean_power_test(a),
        support_growth: growth,
        witness,
    }
}

/// Primitivity verdict and the least exponent `k` with `A^k > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Primitivity {
    pub primitive: bool,
    pub exponent: Option<usize>,
}

/// Upper bound on the primitivity exponent of an `n x n` matrix.
pub fn wielandt_bound(n: usize) -> usize {
    (n - 1) * (n - 1) + 1
}

pub fn is_primitive(a: &NonnegativeMatrix) -> Primitivity {
    let n = a.dim();
    let support = BoolMatrix::support(a);
    let bound = wielandt_bound(n);
    // Powers of 2 up to the bound.
    let mut powers = vec![support.clone()];
    while (1usize << (powers.len() - 1)) < bound {
        let last = powers.last().expect("nonempty");
        powers.push(last.mul(last));
    }
    // A^k > 0 is monotone in k once it holds (a positive power times a
    // matrix without zero columns stays positive), so the least exponent can
    // be located by binary lifting.
    let not_primitive = Primitivity {
        primitive: false,
        exponent: None,
    };
    let top = powers.last().expect("nonempty");
    let reach_bound = {
        // A^bound, assembled from the binary expansion.
        let mut acc: Option<BoolMatrix> = None;
        for (bit, p) in powers.iter().enumerate() {
            if bound >> bit & 1 == 1 {
                acc = Some(match acc {
                    None => p.clone(),
                    Some(m) => m.mul(p),
                });
            }
        }
        acc.unwrap_or_else(|| top.clone())
    };
    if !reach_bound.all_true() {
        return not_primitive;
    }
    let mut acc: Option<BoolMatrix> = None;
    let mut k = 0usize;
    for bit in (0..powers.len()).rev() {
        let cand = match &acc {
            None => powers[bit].clone(),
            Some(m) => m.mul(&powers[bit]),
        };
        if k + (1 << bit) < bound && !cand.all_true() {
            acc = Some(cand);
            k += 1 << bit;
        }
    }
    Primitivity {
        primitive: true,
        exponent: Some(k + 1),
    }
}

fn bfs_levels(succ: &[Vec<usize>]) -> Vec<usize> {
    let mut level = vec![usize::MAX; succ.len()];
    level[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in &succ[u] {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    level
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn period_from_levels(succ: &[Vec<usize>], level: &[usize]) -> usize {
    let mut g = 0;
    for (u, out) in succ.iter().enumerate() {
        for &v in out {
            g = gcd(g, (level[u] + 1).abs_diff(level[v]));
        }
    }
    // Only the 1x1 zero matrix has no cycle; it is assigned period 1.
    g.max(1)
}

/// Index of imprimitivity of an irreducible matrix.
pub fn period(a: &NonnegativeMatrix) -> Result<usize> {
    if !is_irreducible(a).irreducible {
        return Err(Error::Reducible);
    }
    let succ = successors(a);
    Ok(period_from_levels(&succ, &bfs_levels(&succ)))
}

/// Cyclic classes of an irreducible matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicStructure {
    pub period: usize,
    pub classes: Vec<Vec<usize>>,
    /// Old indices in their new order (`permutation[new] = old`).
    pub permutation: Vec<usize>,
}

impl CyclicStructure {
    /// Checks that every support edge runs from class `j` to class `j + 1 mod m`.
    pub fn verify(&self, a: &NonnegativeMatrix) -> bool {
        let n = a.dim();
        let mut class_of = vec![usize::MAX; n];
        for (c, members) in self.classes.iter().enumerate() {
            for &i in members {
                if i >= n || class_of[i] != usize::MAX {
                    return false;
                }
                class_of[i] = c;
            }
        }
        if class_of.contains(&usize::MAX) {
            return false;
        }
        let m = self.period;
        (0..n).all(|i| (0..n).all(|j| a.get(i, j) == 0.0 || class_of[j] == (class_of[i] + 1) % m))
    }
}

pub fn cyclic_normal_form(a: &NonnegativeMatrix) -> Result<CyclicStructure> {
    if !is_irreducible(a).irreducible {
        return Err(Error::Reducible);
    }
    let succ = successors(a);
    let level = bfs_levels(&succ);
    let m = period_from_levels(&succ, &level);
    let mut classes = vec![Vec::new(); m];
    for (i, &l) in level.iter().enumerate() {
        classes[l % m].push(i);
    }
    let permutation = classes.iter().flatten().copied().collect();
    Ok(CyclicStructure {
        period: m,
        classes,
        permutation,
    })
}

/// Block upper triangular form of a reducible matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    /// Old indices in their new order (`permutation[new] = old`).
    pub permutation: Vec<usize>,
    pub block_sizes: Vec<usize>,
}

impl BlockForm {
    /// Checks that the permuted matrix vanishes below the diagonal blocks.
    pub fn verify(&self, a: &NonnegativeMatrix) -> bool {
        let Ok(p) = a.permuted(&self.permutation) else {
            return false;
        };
        let mut block_of = Vec::with_capacity(a.dim());
        for (b, &s) in self.block_sizes.iter().enumerate() {
            block_of.extend(std::iter::repeat_n(b, s));
        }
        block_of.len() == a.dim()
            && (0..a.dim())
                .all(|i| (0..a.dim()).all(|j| block_of[i] <= block_of[j] || p.get(i, j) == 0.0))
    }
}

pub fn reducible_block_form(a: &NonnegativeMatrix) -> Result<BlockForm> {
    let comps = components_topological(&successors(a));
    if comps.len() == 1 {
        return Err(Error::Irreducible);
    }
    Ok(BlockForm {
        permutation: comps.iter().flatten().copied().collect(),
        block_sizes: comps.iter().map(Vec::len).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m<const N: usize>(rows: [[f64; N]; N]) -> NonnegativeMatrix {
        NonnegativeMatrix::from_rows(&rows).unwrap()
    }

    fn cycle3() -> NonnegativeMatrix {
        m([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
    }

    #[test]
    fn irreducibility_examples() {
        let r = is_irreducible(&m([[0.0, 1.0], [1.0, 0.0]]));
        assert!(r.irreducible && r.method_agreement);
        assert_eq!(r.support_growth, vec![1, 2]);

        let r = is_irreducible(&m([[1.0, 1.0], [0.0, 1.0]]));
        assert!(!r.irreducible && r.method_agreement);
        assert_eq!(r.witness, vec![1]);

        let r = is_irreducible(&NonnegativeMatrix::identity(2).unwrap());
        assert!(!r.irreducible && r.method_agreement);
        assert_eq!(r.witness.len(), 1);

        // 1x1 convention
        let r = is_irreducible(&m([[0.0]]));
        assert!(r.irreducible && r.method_agreement && r.witness.is_empty());
    }

    #[test]
    fn primitivity_examples() {
        assert_eq!(
            is_primitive(&m([[0.0, 1.0], [1.0, 1.0]])),
            Primitivity {
                primitive: true,
                exponent: Some(2)
            }
        );
        assert_eq!(
            is_primitive(&m([[0.0, 1.0], [1.0, 0.0]])),
            Primitivity {
                primitive: false,
                exponent: None
            }
        );
        assert_eq!(is_primitive(&m([[1.0, 1.0], [1.0, 1.0]])).exponent, Some(1));
        assert_eq!(is_primitive(&m([[2.0]])).exponent, Some(1));
        assert!(!is_primitive(&m([[0.0]])).primitive);
        assert!(!is_primitive(&m([[1.0, 1.0], [0.0, 1.0]])).primitive);
    }

    #[test]
    fn wielandt_matrix_reaches_the_bound() {
        // Successor cycle 0->1->...->n-1->0 plus the chord n-1 -> 1.
        let n = 6;
        let mut e = vec![0.0; n * n];
        for i in 0..n - 1 {
            e[i * n + i + 1] = 1.0;
        }
        e[(n - 1) * n] = 1.0;
        e[(n - 1) * n + 1] = 1.0;
        let a = NonnegativeMatrix::new(n, e).unwrap();
        assert_eq!(is_primitive(&a).exponent, Some(wielandt_bound(n)));
    }

    #[test]
    fn period_examples() {
        assert_eq!(period(&m([[0.0, 1.0], [1.0, 0.0]])).unwrap(), 2);
        assert_eq!(period(&cycle3()).unwrap(), 3);
        assert_eq!(period(&m([[1.0, 1.0], [1.0, 1.0]])).unwrap(), 1);
        assert_eq!(period(&m([[1.0, 1.0], [0.0, 1.0]])), Err(Error::Reducible));
    }

    #[test]
    fn cyclic_form_examples() {
        let c = cyclic_normal_form(&cycle3()).unwrap();
        assert_eq!(c.period, 3);
        assert_eq!(c.classes, vec![vec![0], vec![1], vec![2]]);
        assert!(c.verify(&cycle3()));

        let a = m([
            [0.0, 0.0, 1.0, 1.0],
            [0.0, 0.0, 1.0, 1.0],
            [1.0, 1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0],
        ]);
        let c = cyclic_normal_form(&a).unwrap();
        assert_eq!(c.period, 2);
        assert_eq!(c.classes, vec![vec![0, 1], vec![2, 3]]);
        assert!(c.verify(&a));

        let ones = m([[1.0, 1.0], [1.0, 1.0]]);
        let c = cyclic_normal_form(&ones).unwrap();
        assert_eq!(c.period, 1);
        assert_eq!(c.classes, vec![vec![0, 1]]);
        assert_eq!(c.permutation, vec![0, 1]);
    }

    #[test]
    fn block_form_examples() {
        let a = m([[1.0, 1.0], [0.0, 1.0]]);
        let b = reducible_block_form(&a).unwrap();
        assert_eq!(b.permutation, vec![0, 1]);
        assert_eq!(b.block_sizes, vec![1, 1]);
        assert!(b.verify(&a));

        let a = m([[1.0, 0.0], [1.0, 1.0]]);
        let b = reducible_block_form(&a).unwrap();
        assert_eq!(b.permutation, vec![1, 0]);
        assert!(b.verify(&a));

        let b = reducible_block_form(&NonnegativeMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(b.block_sizes, vec![1, 1, 1]);

        assert_eq!(reducible_block_form(&cycle3()), Err(Error::Irreducible));
        assert_eq!(reducible_block_form(&m([[0.0]])), Err(Error::Irreducible));
    }

    #[test]
    fn nilpotency() {
        assert!(is_nilpotent(&m([[0.0, 1.0], [0.0, 0.0]])));
        assert!(!is_nilpotent(&m([[0.0, 1.0], [1.0, 0.0]])));
    }
}
