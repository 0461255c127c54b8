//! Brute-force reference for graded dimensions.
//!
//! Works in the induced module `U(L) (x) V0` directly: vectors are sums of
//! free words of lowering letters applied to top vectors, a raising or
//! degree-zero letter is pushed through a word with `x n = [x, n] + n x`
//! until it reaches the top, and `dim V_{-s}` is the rank of the pairing
//! between lowering words and all raising words of length `s`. Nothing here
//! goes through the engine's signature recursion or its window solves.
//!
//! The top may be periodized by a residue pattern `W`: the true loop
//! module `W inside V0 (x) C[x, 1/x]` is modelled by tracking the loop
//! index of every vector explicitly, so the reference never assumes the
//! periodicity that the engine exploits.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use qtorus::algebra::{bracket_l_keys, enumerate_graded, GradingBasis, LKey};
use qtorus::coeff::{FieldElement, Fp, PrimeSpec, Scalar};
use qtorus::hwmod::TopModule;
use qtorus::ztwo::SubmoduleSpecW;

/// Free lowering word -> top vector it is applied to.
type Vector<S> = HashMap<Vec<LKey>, Vec<S>>;

fn add_to<S: Scalar>(out: &mut Vector<S>, w: Vec<LKey>, v: &[S], c: &S) {
    let e = out.entry(w).or_insert_with(|| vec![S::zero(); v.len()]);
    for (a, b) in e.iter_mut().zip(v) {
        if !b.is_zero() {
            *a = a.add(&b.mul(c));
        }
    }
}

pub struct Oracle<S: Scalar> {
    top: Arc<dyn TopModule>,
    basis: GradingBasis,
    d: usize,
    gens: Vec<LKey>,
    probes: Vec<LKey>,
    top_act: HashMap<LKey, Vec<S>>,
    lift: Box<dyn Fn(&FieldElement) -> S>,
}

impl<S: Scalar> Oracle<S> {
    /// `lift` maps exact values into the field the computation runs in.
    pub fn new(
        top: Arc<dyn TopModule>,
        basis: GradingBasis,
        gen_window: i64,
        probe_window: i64,
        lift: impl Fn(&FieldElement) -> S + 'static,
    ) -> Self {
        let d = top.dim();
        Oracle {
            gens: enumerate_graded(-1, gen_window, &basis),
            probes: enumerate_graded(1, probe_window, &basis),
            top,
            basis,
            d,
            top_act: HashMap::new(),
            lift: Box::new(lift),
        }
    }

    fn grade(&self, k: &LKey) -> i64 {
        self.basis.grade_of(k)
    }

    fn loop_index(&self, k: &LKey) -> i64 {
        match k {
            LKey::Torus { m, .. } => self.basis.coords(*m).1,
            _ => 0,
        }
    }

    fn degree_zero(&mut self, k: &LKey) -> Vec<S> {
        if let Some(b) = self.top_act.get(k) {
            return b.clone();
        }
        let m = self.top.act(k).expect("degree-zero action");
        let d = self.d;
        let b: Vec<S> = (0..d * d)
            .map(|i| (self.lift)(m.get(i / d, i % d)))
            .collect();
        self.top_act.insert(*k, b.clone());
        b
    }

    /// `x . (word v)` for a free word of lowering letters, accumulated
    /// into `out` with factor `c`.
    fn act_word(&mut self, x: &LKey, word: &[LKey], v: &[S], c: &S, out: &mut Vector<S>) {
        if x.is_central() {
            let (c1, c2) = self.top.central();
            let z = if *x == LKey::C1 { c1 } else { c2 };
            add_to(out, word.to_vec(), v, &c.mul(&(self.lift)(&z)));
            return;
        }
        let g = self.grade(x);
        if g < 0 {
            let mut w = vec![*x];
            w.extend_from_slice(word);
            add_to(out, w, v, c);
            return;
        }
        let Some((n1, rest)) = word.split_first() else {
            if g == 0 {
                let a = self.degree_zero(x);
                let d = self.d;
                let av: Vec<S> = (0..d)
                    .map(|i| S::dot((0..d).map(|j| (&a[i * d + j], &v[j]))))
                    .collect();
                add_to(out, Vec::new(), &av, c);
            }
            return;
        };
        // x n1 rest = [x, n1] rest + n1 (x rest)
        for (key, b) in bracket_l_keys(x, n1).iter() {
            let b = (self.lift)(b);
            self.act_word(key, rest, v, &c.mul(&b), out);
        }
        let mut inner = Vector::new();
        self.act_word(x, rest, v, c, &mut inner);
        for (w, u) in inner {
            let mut w2 = vec![*n1];
            w2.extend(w);
            add_to(out, w2, &u, &S::one());
        }
    }

    fn apply(&mut self, x: &LKey, u: &Vector<S>) -> Vector<S> {
        let mut out = Vector::new();
        let one = S::one();
        for (w, v) in u {
            self.act_word(x, w, v, &one, &mut out);
        }
        out.retain(|_, v| v.iter().any(|y| !y.is_zero()));
        out
    }

    /// Top components of `p_1 ... p_s u` over all raising words, depth
    /// first in probe order, each tagged with the loop shift of the word.
    fn raise_all(&mut self, u: &Vector<S>, s: usize, shift: i64, out: &mut Vec<(i64, Vec<S>)>) {
        if s == 0 {
            let v = u
                .get(&Vec::new())
                .cloned()
                .unwrap_or_else(|| vec![S::zero(); self.d]);
            out.push((shift, v));
            return;
        }
        let probes = self.probes.clone();
        for p in &probes {
            let next = self.apply(p, u);
            let k = self.loop_index(p);
            if next.is_empty() {
                // keep row positions aligned across columns
                self.push_zeros(s - 1, shift + k, out);
            } else {
                self.raise_all(&next, s - 1, shift + k, out);
            }
        }
    }

    fn push_zeros(&self, s: usize, shift: i64, out: &mut Vec<(i64, Vec<S>)>) {
        if s == 0 {
            out.push((shift, vec![S::zero(); self.d]));
            return;
        }
        for p in &self.probes {
            self.push_zeros(s - 1, shift + self.loop_index(p), out);
        }
    }

    /// Whether `sum c_w w . e_b` vanishes in the irreducible quotient, for
    /// lowering words `w` of total grade `-s`.
    pub fn vanishes(&mut self, terms: &[(Vec<LKey>, S)], b: usize, s: usize) -> bool {
        let mut u = Vector::new();
        for (w, c) in terms {
            let mut e = vec![S::zero(); self.d];
            e[b] = c.clone();
            add_to(&mut u, w.clone(), &e, &S::one());
        }
        u.retain(|_, v| v.iter().any(|y| !y.is_zero()));
        let mut raised = Vec::new();
        self.raise_all(&u, s, 0, &mut raised);
        raised.iter().all(|(_, v)| v.iter().all(|x| x.is_zero()))
    }

    /// Cell dimensions `dim V_{-s, r}` for `s <= depth`, `|r| <= loop_window`,
    /// of the irreducible quotient with top `W`.
    pub fn cell_dims(
        &mut self,
        w: &SubmoduleSpecW,
        depth: usize,
        loop_window: i64,
    ) -> Vec<Vec<usize>> {
        let kmax = self
            .gens
            .iter()
            .map(|g| self.loop_index(g).abs())
            .max()
            .unwrap_or(0);
        let span = |s: usize| loop_window + (depth - s) as i64 * kmax;
        // level s: cell r -> basis vectors (lowering word, top vector, loop index)
        type Cells = HashMap<i64, Vec<(Vec<LKey>, usize, i64)>>;
        let mut level: Cells = (-span(0)..=span(0))
            .map(|r| {
                (
                    r,
                    w.cell(r).into_iter().map(|b| (Vec::new(), b, r)).collect(),
                )
            })
            .collect();
        let mut dims = vec![(-loop_window..=loop_window)
            .map(|r| level[&r].len())
            .collect::<Vec<_>>()];
        let gens = self.gens.clone();
        for s in 1..=depth {
            let mut next: Cells = HashMap::new();
            for r in -span(s)..=span(s) {
                let mut cands = Vec::new();
                for g in &gens {
                    let k = self.loop_index(g);
                    if let Some(prev) = level.get(&(r - k)) {
                        for (word, b, r0) in prev {
                            let mut v = vec![*g];
                            v.extend_from_slice(word);
                            cands.push((v, *b, *r0));
                        }
                    }
                }
                let mut echelon: Vec<(usize, Vec<S>)> = Vec::new();
                let mut chosen = Vec::new();
                for (word, b, r0) in cands {
                    let mut u = Vector::new();
                    let mut e = vec![S::zero(); self.d];
                    e[b] = S::one();
                    u.insert(word.clone(), e);
                    let mut raised = Vec::new();
                    self.raise_all(&u, s, 0, &mut raised);
                    let mut col = Vec::new();
                    for (kp, v) in raised {
                        for b2 in w.cell(r + kp) {
                            col.push(v[b2].clone());
                        }
                    }
                    if insert(&mut echelon, col) {
                        chosen.push((word, b, r0));
                    }
                }
                next.insert(r, chosen);
            }
            level = next;
            dims.push(
                (-loop_window..=loop_window)
                    .map(|r| level[&r].len())
                    .collect(),
            );
        }
        dims
    }

    /// Total dimensions of the plain module, `s <= depth`.
    pub fn dims(&mut self, depth: usize) -> Vec<usize> {
        let full = SubmoduleSpecW::full(self.d);
        self.cell_dims(&full, depth, 0)
            .into_iter()
            .map(|row| row[0])
            .collect()
    }
}

/// Reduces `v` against an echelon family and adds it if independent.
fn insert<S: Scalar>(echelon: &mut Vec<(usize, Vec<S>)>, mut v: Vec<S>) -> bool {
    for (p, row) in echelon.iter() {
        if v[*p].is_zero() {
            continue;
        }
        let f = v[*p].clone();
        for (x, y) in v.iter_mut().zip(row) {
            if !y.is_zero() {
                *x = x.sub(&f.mul(y));
            }
        }
    }
    let Some(p) = v.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let inv = v[p].inv().expect("nonzero pivot");
    let v: Vec<S> = v.iter().map(|x| x.mul(&inv)).collect();
    // keep earlier rows reduced at the new pivot
    for (_, row) in echelon.iter_mut() {
        if !row[p].is_zero() {
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
    }
    echelon.push((p, v));
    true
}

pub fn exact_oracle(
    top: Arc<dyn TopModule>,
    basis: GradingBasis,
    k: i64,
    k2: i64,
) -> Oracle<FieldElement> {
    Oracle::new(top, basis, k, k2, |x: &FieldElement| x.clone())
}

/// Same reference over a prime field at the evaluation point `spec`.
pub fn prime_oracle(
    top: Arc<dyn TopModule>,
    basis: GradingBasis,
    k: i64,
    k2: i64,
    spec: PrimeSpec,
) -> Oracle<Fp> {
    Oracle::new(top, basis, k, k2, move |x: &FieldElement| {
        x.to_prime(&spec)
            .expect("denominator vanishes at the evaluation point")
    })
}
