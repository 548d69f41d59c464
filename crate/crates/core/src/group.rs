//! Marked groups with exact normal forms.
//!
//! The catalog covers free groups, finitely generated abelian groups,
//! the integral Heisenberg group, free products of catalog groups and
//! mapping tori `Fₙ ⋊_φ ℤ`. Every element is stored in a canonical normal
//! form, so element equality is structural equality.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::word::{default_names, push_reduced, Letter, Word};

/// A group element in the normal form of its group kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Freely reduced word.
    Free(Vec<Letter>),
    /// Coordinate vector reduced modulo the relation lattice.
    Abelian(Vec<i64>),
    /// `xᵃ yᵇ zᶜ` stored as `[a, b, c]`.
    Heisenberg([i64; 3]),
    /// Alternating nontrivial syllables `(factor, element)`.
    FreeProduct(Vec<(usize, Element)>),
    /// `tᵏ w` stored as `(k, w)` with `w` freely reduced.
    MappingTorus(i64, Vec<Letter>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    Free {
        rank: usize,
    },
    Abelian {
        rank: usize,
        relations: Lattice,
    },
    Heisenberg,
    FreeProduct {
        factors: Vec<MarkedGroup>,
        offsets: Vec<usize>,
    },
    /// Fiber generators are `0..rank`; generator `rank` is the stable letter `t`,
    /// with `t w t⁻¹ = φ(w)`.
    MappingTorus {
        rank: usize,
        phi: Vec<Vec<Letter>>,
        phi_inverse: Vec<Vec<Letter>>,
    },
}

/// A group together with a finite generating set and names for its generators.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedGroup {
    kind: GroupKind,
    names: Vec<String>,
}

impl MarkedGroup {
    pub fn free(rank: usize) -> Self {
        MarkedGroup {
            kind: GroupKind::Free { rank },
            names: default_names(rank),
        }
    }

    /// `ℤʳᵃⁿᵏ / ⟨relations⟩`.
    pub fn abelian(rank: usize, relations: &[Vec<i64>]) -> Result<Self> {
        if relations.iter().any(|r| r.len() != rank) {
            return Err(Error::Spec(format!(
                "abelian relations must have length {rank}"
            )));
        }
        Ok(MarkedGroup {
            kind: GroupKind::Abelian {
                rank,
                relations: Lattice::new(rank, relations),
            },
            names: default_names(rank),
        })
    }

    pub fn free_abelian(rank: usize) -> Self {
        MarkedGroup::abelian(rank, &[]).expect("no relations")
    }

    /// `H₃(ℤ)` generated by `x, y` and the central `z = x⁻¹y⁻¹xy`.
    pub fn heisenberg() -> Self {
        MarkedGroup {
            kind: GroupKind::Heisenberg,
            names: vec!["x".into(), "y".into(), "z".into()],
        }
    }

    pub fn free_product(factors: Vec<MarkedGroup>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Spec("free product needs at least one factor".into()));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut names = Vec::new();
        for f in &factors {
            offsets.push(names.len());
            names.extend(f.names.iter().cloned());
        }
        check_names(&names)?;
        Ok(MarkedGroup {
            kind: GroupKind::FreeProduct { factors, offsets },
            names,
        })
    }

    /// Mapping torus of the automorphism `φ` of the free group of rank `phi.len()`.
    ///
    /// `phi[i]` is the image of generator `i`. The inverse is found by Nielsen
    /// reduction when not supplied.
    pub fn mapping_torus(phi: Vec<Word>, phi_inverse: Option<Vec<Word>>) -> Result<Self> {
        let rank = phi.len();
        if rank == 0 {
            return Err(Error::Spec("mapping torus needs a fiber of positive rank".into()));
        }
        let phi: Vec<Vec<Letter>> = phi.iter().map(|w| reduce(w.letters())).collect();
        for w in &phi {
            if w.iter().any(|l| l.generator() >= rank) {
                return Err(Error::Spec("φ image uses a letter outside the fiber".into()));
            }
        }
        let phi_inverse = match phi_inverse {
            Some(inv) => inv.iter().map(|w| reduce(w.letters())).collect(),
            None => invert_automorphism(&phi).ok_or_else(|| {
                Error::Spec("could not invert φ; supply phi_inverse".into())
            })?,
        };
        if phi_inverse.len() != rank {
            return Err(Error::Spec("phi_inverse has the wrong rank".into()));
        }
        for g in 0..rank {
            let x = vec![Letter::new(g, false)];
            if substitute(&phi, &substitute(&phi_inverse, &x)) != x
                || substitute(&phi_inverse, &substitute(&phi, &x)) != x
            {
                return Err(Error::Spec("φ is not an automorphism with the given inverse".into()));
            }
        }
        let mut names = default_names(rank);
        names.push("t".into());
        Ok(MarkedGroup {
            kind: GroupKind::MappingTorus {
                rank,
                phi,
                phi_inverse,
            },
            names,
        })
    }

    /// Replaces the generator names. Names must be distinct lowercase ASCII letters.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.names.len() {
            return Err(Error::Spec(format!(
                "expected {} generator names, got {}",
                self.names.len(),
                names.len()
            )));
        }
        check_names(&names)?;
        if let GroupKind::FreeProduct { factors, offsets } = &mut self.kind {
            for (f, &off) in factors.iter_mut().zip(offsets.iter()) {
                f.names = names[off..off + f.names.len()].to_vec();
            }
        }
        self.names = names;
        Ok(self)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of (positive) generators.
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// The symmetrized generating set in shortlex order.
    pub fn letters(&self) -> Vec<Letter> {
        (0..2 * self.rank()).map(Letter::from_code).collect()
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            GroupKind::Free { .. } => "free",
            GroupKind::Abelian { .. } => "abelian",
            GroupKind::Heisenberg => "heisenberg",
            GroupKind::FreeProduct { .. } => "free_product",
            GroupKind::MappingTorus { .. } => "mapping_torus",
        }
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::Free { .. } => Element::Free(Vec::new()),
            GroupKind::Abelian { rank, .. } => Element::Abelian(vec![0; *rank]),
            GroupKind::Heisenberg => Element::Heisenberg([0; 3]),
            GroupKind::FreeProduct { .. } => Element::FreeProduct(Vec::new()),
            GroupKind::MappingTorus { .. } => Element::MappingTorus(0, Vec::new()),
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        *g == self.identity()
    }

    /// The element represented by a single letter.
    pub fn letter(&self, l: Letter) -> Element {
        let g = self.positive_generator(l.generator());
        if l.is_inverse() {
            self.inverse(&g)
        } else {
            g
        }
    }

    fn positive_generator(&self, i: usize) -> Element {
        match &self.kind {
            GroupKind::Free { .. } => Element::Free(vec![Letter::new(i, false)]),
            GroupKind::Abelian { rank, relations } => {
                let mut v = vec![0; *rank];
                v[i] = 1;
                Element::Abelian(relations.reduce(&v))
            }
            GroupKind::Heisenberg => {
                let mut v = [0; 3];
                v[i] = 1;
                Element::Heisenberg(v)
            }
            GroupKind::FreeProduct { factors, offsets } => {
                let (f, local) = locate(offsets, i);
                let s = factors[f].positive_generator(local);
                self.syllable(f, s)
            }
            GroupKind::MappingTorus { rank, .. } => {
                if i == *rank {
                    Element::MappingTorus(1, Vec::new())
                } else {
                    Element::MappingTorus(0, vec![Letter::new(i, false)])
                }
            }
        }
    }

    /// Embeds an element of factor `f` of a free product.
    pub fn syllable(&self, f: usize, s: Element) -> Element {
        match &self.kind {
            GroupKind::FreeProduct { factors, .. } => {
                if factors[f].is_identity(&s) {
                    Element::FreeProduct(Vec::new())
                } else {
                    Element::FreeProduct(vec![(f, s)])
                }
            }
            _ => panic!("syllable() on a group that is not a free product"),
        }
    }

    pub fn factors(&self) -> &[MarkedGroup] {
        match &self.kind {
            GroupKind::FreeProduct { factors, .. } => factors,
            _ => &[],
        }
    }

    /// Evaluates a word in the generators.
    pub fn eval(&self, w: &Word) -> Element {
        w.iter()
            .fold(self.identity(), |g, &l| self.mul_letter(&g, l))
    }

    /// Product `g·h` with validation of both operands.
    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        self.validate(g)?;
        self.validate(h)?;
        Ok(self.mul(g, h))
    }

    /// Product `g·h`; both operands must already be normal forms of this group.
    pub fn mul(&self, g: &Element, h: &Element) -> Element {
        match (&self.kind, g, h) {
            (GroupKind::Free { .. }, Element::Free(u), Element::Free(v)) => {
                let mut out = u.clone();
                push_reduced(&mut out, v.iter().copied());
                Element::Free(out)
            }
            (GroupKind::Abelian { relations, .. }, Element::Abelian(u), Element::Abelian(v)) => {
                let sum: Vec<i64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
                Element::Abelian(relations.reduce(&sum))
            }
            (GroupKind::Heisenberg, Element::Heisenberg(u), Element::Heisenberg(v)) => {
                Element::Heisenberg([u[0] + v[0], u[1] + v[1], u[2] + v[2] - u[1] * v[0]])
            }
            (GroupKind::FreeProduct { factors, .. }, Element::FreeProduct(u), Element::FreeProduct(v)) => {
                let mut out = u.clone();
                let mut rest = v.iter();
                for (f, s) in rest.by_ref() {
                    match out.last() {
                        Some((lf, ls)) if lf == f => {
                            let merged = factors[*f].mul(ls, s);
                            out.pop();
                            if !factors[*f].is_identity(&merged) {
                                out.push((*f, merged));
                                break;
                            }
                        }
                        _ => {
                            out.push((*f, s.clone()));
                            break;
                        }
                    }
                }
                out.extend(rest.cloned());
                Element::FreeProduct(out)
            }
            (
                GroupKind::MappingTorus {
                    phi, phi_inverse, ..
                },
                Element::MappingTorus(k1, w1),
                Element::MappingTorus(k2, w2),
            ) => {
                let mut out = power(phi, phi_inverse, w1, -k2);
                push_reduced(&mut out, w2.iter().copied());
                Element::MappingTorus(k1 + k2, out)
            }
            _ => panic!("element kind does not match group kind"),
        }
    }

    /// Right multiplication by a single letter.
    pub fn mul_letter(&self, g: &Element, l: Letter) -> Element {
        match (&self.kind, g) {
            (GroupKind::Free { .. }, Element::Free(u)) => {
                let mut out = u.clone();
                push_reduced(&mut out, [l]);
                Element::Free(out)
            }
            (GroupKind::Abelian { relations, .. }, Element::Abelian(u)) => {
                let mut v = u.clone();
                v[l.generator()] += l.sign();
                Element::Abelian(relations.reduce(&v))
            }
            (GroupKind::Heisenberg, Element::Heisenberg([a, b, c])) => {
                let s = l.sign();
                Element::Heisenberg(match l.generator() {
                    0 => [a + s, *b, c - b * s],
                    1 => [*a, b + s, *c],
                    _ => [*a, *b, c + s],
                })
            }
            (
                GroupKind::MappingTorus {
                    rank,
                    phi,
                    phi_inverse,
                },
                Element::MappingTorus(k, w),
            ) => {
                if l.generator() == *rank {
                    let s = l.sign();
                    Element::MappingTorus(k + s, power(phi, phi_inverse, w, -s))
                } else {
                    let mut out = w.clone();
                    push_reduced(&mut out, [l]);
                    Element::MappingTorus(*k, out)
                }
            }
            _ => self.mul(g, &self.letter(l)),
        }
    }

    pub fn inverse(&self, g: &Element) -> Element {
        match (&self.kind, g) {
            (GroupKind::Free { .. }, Element::Free(u)) => {
                Element::Free(u.iter().rev().map(|l| l.inverse()).collect())
            }
            (GroupKind::Abelian { relations, .. }, Element::Abelian(u)) => {
                let neg: Vec<i64> = u.iter().map(|x| -x).collect();
                Element::Abelian(relations.reduce(&neg))
            }
            (GroupKind::Heisenberg, Element::Heisenberg([a, b, c])) => {
                Element::Heisenberg([-a, -b, -c - a * b])
            }
            (GroupKind::FreeProduct { factors, .. }, Element::FreeProduct(u)) => Element::FreeProduct(
                u.iter()
                    .rev()
                    .map(|(f, s)| (*f, factors[*f].inverse(s)))
                    .collect(),
            ),
            (
                GroupKind::MappingTorus {
                    phi, phi_inverse, ..
                },
                Element::MappingTorus(k, w),
            ) => {
                let image = power(phi, phi_inverse, w, *k);
                Element::MappingTorus(-k, image.iter().rev().map(|l| l.inverse()).collect())
            }
            _ => panic!("element kind does not match group kind"),
        }
    }

    /// Checks that `g` is a normal form of this group.
    pub fn validate(&self, g: &Element) -> Result<()> {
        let bad = |why: &str| Err(Error::Representation(format!("{why}: {g:?}")));
        match (&self.kind, g) {
            (GroupKind::Free { rank }, Element::Free(u)) => {
                if u.iter().any(|l| l.generator() >= *rank) {
                    return bad("letter outside the free basis");
                }
                if !Word(u.clone()).is_freely_reduced() {
                    return bad("word is not freely reduced");
                }
                Ok(())
            }
            (GroupKind::Abelian { rank, relations }, Element::Abelian(u)) => {
                if u.len() != *rank {
                    return bad("wrong abelian rank");
                }
                if relations.reduce(u) != *u {
                    return bad("vector not reduced modulo relations");
                }
                Ok(())
            }
            (GroupKind::Heisenberg, Element::Heisenberg(_)) => Ok(()),
            (GroupKind::FreeProduct { factors, .. }, Element::FreeProduct(u)) => {
                for (i, (f, s)) in u.iter().enumerate() {
                    let Some(factor) = factors.get(*f) else {
                        return bad("syllable factor out of range");
                    };
                    factor.validate(s)?;
                    if factor.is_identity(s) {
                        return bad("trivial syllable");
                    }
                    if i > 0 && u[i - 1].0 == *f {
                        return bad("adjacent syllables from the same factor");
                    }
                }
                Ok(())
            }
            (GroupKind::MappingTorus { rank, .. }, Element::MappingTorus(_, w)) => {
                if w.iter().any(|l| l.generator() >= *rank) {
                    return bad("fiber letter outside the fiber basis");
                }
                if !Word(w.clone()).is_freely_reduced() {
                    return bad("fiber word is not freely reduced");
                }
                Ok(())
            }
            _ => bad("element kind does not match group kind"),
        }
    }

    /// Word length computed from the normal form, when the kind admits a closed formula.
    pub fn formula_length(&self, g: &Element) -> Option<usize> {
        match (&self.kind, g) {
            (GroupKind::Free { .. }, Element::Free(u)) => Some(u.len()),
            (GroupKind::Abelian { relations, .. }, Element::Abelian(u)) if relations.is_zero() => {
                Some(u.iter().map(|x| x.unsigned_abs() as usize).sum())
            }
            (GroupKind::FreeProduct { factors, .. }, Element::FreeProduct(u)) => u
                .iter()
                .map(|(f, s)| factors[*f].formula_length(s))
                .sum(),
            _ => None,
        }
    }

    /// The shortlex-least geodesic word, when the kind admits a closed formula.
    pub fn formula_geodesic(&self, g: &Element) -> Option<Word> {
        match (&self.kind, g) {
            (GroupKind::Free { .. }, Element::Free(u)) => Some(Word(u.clone())),
            (GroupKind::Abelian { relations, .. }, Element::Abelian(u)) if relations.is_zero() => {
                let mut letters = Vec::new();
                for (i, &x) in u.iter().enumerate() {
                    let l = Letter::new(i, x < 0);
                    letters.extend(std::iter::repeat_n(l, x.unsigned_abs() as usize));
                }
                Some(Word(letters))
            }
            (GroupKind::FreeProduct { factors, offsets }, Element::FreeProduct(u)) => {
                let mut letters = Vec::new();
                for (f, s) in u {
                    let w = factors[*f].formula_geodesic(s)?;
                    letters.extend(w.iter().map(|l| shift(*l, offsets[*f])));
                }
                Some(Word(letters))
            }
            _ => None,
        }
    }

    /// Lifts a word of factor `f` to the free product's alphabet.
    pub fn lift_factor_word(&self, f: usize, w: &Word) -> Word {
        match &self.kind {
            GroupKind::FreeProduct { offsets, .. } => w.iter().map(|l| shift(*l, offsets[f])).collect(),
            _ => w.clone(),
        }
    }

    /// Human-readable normal form.
    pub fn render(&self, g: &Element) -> String {
        match (&self.kind, g) {
            (_, Element::Free(u)) => Word(u.clone()).render(&self.names),
            (GroupKind::Abelian { .. }, Element::Abelian(u)) => {
                let parts: Vec<String> = u
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| power_text(&self.names[i], x))
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join(" ")
                }
            }
            (GroupKind::Heisenberg, Element::Heisenberg(v)) => {
                let parts: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| power_text(&self.names[i], x))
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join(" ")
                }
            }
            (GroupKind::FreeProduct { factors, .. }, Element::FreeProduct(u)) => {
                if u.is_empty() {
                    return "1".into();
                }
                u.iter()
                    .map(|(f, s)| factors[*f].render(s))
                    .collect::<Vec<_>>()
                    .join(" ")
            }
            (GroupKind::MappingTorus { rank, .. }, Element::MappingTorus(k, w)) => {
                let mut out = String::new();
                if *k != 0 {
                    let _ = write!(out, "{}", power_text(&self.names[*rank], *k));
                }
                if !w.is_empty() {
                    if !out.is_empty() {
                        out.push(' ');
                    }
                    out.push_str(&Word(w.clone()).render(&self.names));
                }
                if out.is_empty() {
                    "1".into()
                } else {
                    out
                }
            }
            _ => format!("{g:?}"),
        }
    }

    /// The image of a fiber word under `φᵏ` (mapping tori only).
    pub fn fiber_power(&self, w: &[Letter], k: i64) -> Option<Vec<Letter>> {
        match &self.kind {
            GroupKind::MappingTorus {
                phi, phi_inverse, ..
            } => Some(power(phi, phi_inverse, w, k)),
            _ => None,
        }
    }
}

fn power_text(name: &str, x: i64) -> String {
    if x == 1 {
        name.to_string()
    } else {
        format!("{name}^{x}")
    }
}

fn shift(l: Letter, offset: usize) -> Letter {
    Letter::new(l.generator() + offset, l.is_inverse())
}

fn locate(offsets: &[usize], i: usize) -> (usize, usize) {
    let f = offsets.partition_point(|&o| o <= i) - 1;
    (f, i - offsets[f])
}

fn check_names(names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if n.len() != 1 || !n.chars().all(|c| c.is_ascii_lowercase()) {
            return Err(Error::Spec(format!(
                "generator name '{n}' must be a single lowercase ASCII letter"
            )));
        }
        if names[..i].contains(n) {
            return Err(Error::Spec(format!("duplicate generator name '{n}'")));
        }
    }
    Ok(())
}

fn reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(letters.len());
    push_reduced(&mut out, letters.iter().copied());
    out
}

/// Applies the substitution `images` (image of each positive generator) to `w`.
pub(crate) fn substitute(images: &[Vec<Letter>], w: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::new();
    for l in w {
        let img = &images[l.generator()];
        if l.is_inverse() {
            push_reduced(&mut out, img.iter().rev().map(|x| x.inverse()));
        } else {
            push_reduced(&mut out, img.iter().copied());
        }
    }
    out
}

fn power(phi: &[Vec<Letter>], phi_inverse: &[Vec<Letter>], w: &[Letter], k: i64) -> Vec<Letter> {
    let map = if k >= 0 { phi } else { phi_inverse };
    let mut out = w.to_vec();
    for _ in 0..k.unsigned_abs() {
        out = substitute(map, &out);
    }
    out
}

/// Inverts a free-group automorphism given by generator images.
///
/// Greedy Nielsen reduction on the image tuple, mirrored on the identity
/// tuple; falls back to a bounded search for preimages of each generator.
fn invert_automorphism(phi: &[Vec<Letter>]) -> Option<Vec<Vec<Letter>>> {
    let rank = phi.len();
    let mut images: Vec<Vec<Letter>> = phi.to_vec();
    let mut tracked: Vec<Vec<Letter>> = (0..rank).map(|g| vec![Letter::new(g, false)]).collect();
    let inv = |w: &[Letter]| -> Vec<Letter> { w.iter().rev().map(|l| l.inverse()).collect() };
    let concat = |u: &[Letter], v: &[Letter]| -> Vec<Letter> {
        let mut out = u.to_vec();
        push_reduced(&mut out, v.iter().copied());
        out
    };
    'outer: for _ in 0..10_000 {
        for i in 0..rank {
            for j in 0..rank {
                if i == j {
                    continue;
                }
                for (right, invert) in [(true, false), (true, true), (false, false), (false, true)] {
                    let vj = if invert { inv(&images[j]) } else { images[j].clone() };
                    let candidate = if right { concat(&images[i], &vj) } else { concat(&vj, &images[i]) };
                    if candidate.len() < images[i].len() {
                        let tj = if invert { inv(&tracked[j]) } else { tracked[j].clone() };
                        tracked[i] = if right { concat(&tracked[i], &tj) } else { concat(&tj, &tracked[i]) };
                        images[i] = candidate;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    // The tuple is now a signed permutation of the basis if φ is an automorphism.
    if images.iter().all(|w| w.len() == 1) {
        let mut result = vec![Vec::new(); rank];
        for i in 0..rank {
            let l = images[i][0];
            // θ(x_i) = l, with θ = φ∘ν, so φ(ν(x_i)) = l and φ⁻¹(l) = ν(x_i).
            result[l.generator()] = if l.is_inverse() { inv(&tracked[i]) } else { tracked[i].clone() };
        }
        if result.iter().all(|w| !w.is_empty() || rank == 0) {
            return Some(result);
        }
    }
    search_preimages(phi, 10)
}

fn search_preimages(phi: &[Vec<Letter>], max_len: usize) -> Option<Vec<Vec<Letter>>> {
    let rank = phi.len();
    let mut found: Vec<Option<Vec<Letter>>> = vec![None; rank];
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for code in 0..2 * rank {
                let l = Letter::from_code(code);
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut u = w.clone();
                u.push(l);
                let img = substitute(phi, &u);
                if img.len() == 1 && !img[0].is_inverse() && found[img[0].generator()].is_none() {
                    found[img[0].generator()] = Some(u.clone());
                }
                next.push(u);
            }
        }
        if found.iter().all(Option::is_some) {
            return Some(found.into_iter().map(Option::unwrap).collect());
        }
        frontier = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn f2() -> MarkedGroup {
        MarkedGroup::free(2)
    }

    #[test]
    fn free_inverse_cancels() {
        let g = f2();
        let a = g.eval(&parse_word("a", g.names()).unwrap());
        assert!(g.is_identity(&g.mul(&a, &g.inverse(&a))));
    }

    #[test]
    fn z2_normal_form() {
        let g = MarkedGroup::free_abelian(2);
        let ab = g.eval(&parse_word("a b", g.names()).unwrap());
        let a = g.eval(&parse_word("a", g.names()).unwrap());
        assert_eq!(g.mul(&ab, &a), Element::Abelian(vec![2, 1]));
    }

    #[test]
    fn heisenberg_commutation() {
        let g = MarkedGroup::heisenberg();
        let yx = g.eval(&parse_word("y x", g.names()).unwrap());
        let xyz_inv = g.eval(&parse_word("x y Z", g.names()).unwrap());
        assert_eq!(yx, xyz_inv);
        assert_eq!(yx, Element::Heisenberg([1, 1, -1]));
    }

    #[test]
    fn torsion_abelian_reduces() {
        let g = MarkedGroup::abelian(2, &[vec![3, 0]]).unwrap();
        let a3 = g.eval(&parse_word("a^3 b", g.names()).unwrap());
        assert_eq!(a3, Element::Abelian(vec![0, 1]));
        assert_eq!(g.formula_length(&a3), None);
    }

    #[test]
    fn mapping_torus_default_inverse() {
        let names = default_names(2);
        let phi = vec![parse_word("a b", &names).unwrap(), parse_word("a", &names).unwrap()];
        let g = MarkedGroup::mapping_torus(phi, None).unwrap();
        match g.kind() {
            GroupKind::MappingTorus { phi_inverse, .. } => {
                assert_eq!(Word(phi_inverse[0].clone()), parse_word("b", &names).unwrap());
                assert_eq!(Word(phi_inverse[1].clone()), parse_word("B a", &names).unwrap());
            }
            _ => unreachable!(),
        }
        // t a t⁻¹ = φ(a) = ab
        let tat = g.eval(&parse_word("t a T", g.names()).unwrap());
        let ab = g.eval(&parse_word("a b", g.names()).unwrap());
        assert_eq!(tat, ab);
    }

    #[test]
    fn non_automorphism_is_rejected() {
        let names = default_names(2);
        let phi = vec![parse_word("a a", &names).unwrap(), parse_word("b", &names).unwrap()];
        assert!(MarkedGroup::mapping_torus(phi, None).is_err());
    }

    #[test]
    fn free_product_merges_syllables() {
        let g = MarkedGroup::free_product(vec![
            MarkedGroup::free_abelian(1).with_names(vec!["t".into()]).unwrap(),
            MarkedGroup::heisenberg(),
        ])
        .unwrap();
        assert_eq!(g.names(), &["t", "x", "y", "z"]);
        let w = g.eval(&parse_word("t x X T", g.names()).unwrap());
        assert!(g.is_identity(&w));
        let u = g.eval(&parse_word("t x z t", g.names()).unwrap());
        match &u {
            Element::FreeProduct(s) => assert_eq!(s.len(), 3),
            _ => unreachable!(),
        }
        assert!(g.validate(&u).is_ok());
        assert_eq!(g.formula_length(&u), None);
    }

    #[test]
    fn malformed_forms_are_rejected() {
        let g = f2();
        let bad = Element::Free(vec![Letter::new(0, false), Letter::new(0, true)]);
        assert!(matches!(g.multiply(&bad, &g.identity()), Err(Error::Representation(_))));
        assert!(g.multiply(&Element::Heisenberg([0; 3]), &g.identity()).is_err());
    }
}
