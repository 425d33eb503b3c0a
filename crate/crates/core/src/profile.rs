//! APD profiles: arrays `(α₀, …, α_k)` of non-decreasing step functions with a
//! constant head, their arithmetic, the Property C scheduler and instance
//! verification.
//!
//! A value `α` bounds a part by `⌊α⌋` pieces: "dimension at most `α − 1`" with
//! a non-integral bound means at most the largest integer below it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::decompose::DecompositionReport;
use crate::error::ProfileError;
use crate::ext::{ceil_nonneg, floor_nonneg, ExtReal};
use crate::scale::ScaleGraph;
use crate::space::FiniteMetricSpace;
use crate::subset::Subset;

/// Non-decreasing step function on `[0, ∞)`: value `vᵢ` from threshold `tᵢ`
/// up to the next one; the first value also applies below `t₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileFn {
    breakpoints: Vec<(f64, f64)>,
}

impl ProfileFn {
    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<ProfileFn, ProfileError> {
        if breakpoints.is_empty() {
            return Err(ProfileError::NoBreakpoints);
        }
        for w in breakpoints.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(ProfileError::UnsortedBreakpoints);
            }
            if !(w[0].1 <= w[1].1) {
                return Err(ProfileError::Decreasing);
            }
        }
        if breakpoints.iter().any(|&(t, v)| !t.is_finite() || !v.is_finite() || t < 0.0 || v < 0.0) {
            return Err(ProfileError::BadValue);
        }
        Ok(ProfileFn { breakpoints })
    }

    pub fn constant(value: f64) -> ProfileFn {
        ProfileFn {
            breakpoints: vec![(0.0, value)],
        }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn eval(&self, r: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&(t, _)| t <= r);
        self.breakpoints[k.saturating_sub(1)].1
    }

    pub fn is_constant(&self) -> bool {
        let first = self.breakpoints[0].1;
        self.breakpoints.iter().all(|&(_, v)| v == first)
    }

    /// Drops breakpoints that do not change the value.
    fn simplified(mut breakpoints: Vec<(f64, f64)>) -> ProfileFn {
        breakpoints.dedup_by(|later, earlier| later.1 == earlier.1);
        ProfileFn { breakpoints }
    }

    /// Pointwise `op(self, other)` for an operation monotone in both
    /// arguments, evaluated on the merged breakpoints.
    pub fn zip_with(&self, other: &ProfileFn, op: impl Fn(f64, f64) -> f64) -> ProfileFn {
        let mut ts: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .map(|&(t, _)| t)
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let bps = ts
            .into_iter()
            .map(|t| (t, op(self.eval(t), other.eval(t))))
            .collect();
        ProfileFn::simplified(bps)
    }

    pub fn max(&self, other: &ProfileFn) -> ProfileFn {
        self.zip_with(other, f64::max)
    }

    /// `α ∘ β`.
    pub fn compose(&self, beta: &Rescale) -> ProfileFn {
        match beta {
            Rescale::Step(b) => ProfileFn::simplified(
                b.breakpoints.iter().map(|&(t, v)| (t, self.eval(v))).collect(),
            ),
            Rescale::Affine { slope, offset } => {
                let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.breakpoints.len());
                out.push((0.0, self.eval(*offset)));
                for &(t, v) in &self.breakpoints {
                    let at = (t - offset) / slope;
                    if at > 0.0 {
                        out.push((at, v));
                    }
                }
                ProfileFn::simplified(out)
            }
        }
    }

    /// Integer parts of the values on integer arguments.
    pub fn to_integral(&self) -> ProfileFn {
        shift_thresholds(&self.breakpoints, ceil_nonneg, floor_nonneg)
    }

    /// Precomposition with `r ↦ ⌊r⌋ + 1`.
    pub fn from_integral(&self) -> ProfileFn {
        shift_thresholds(&self.breakpoints, |t| (ceil_nonneg(t) - 1.0).max(0.0), |v| v)
    }
}

fn shift_thresholds(
    bps: &[(f64, f64)],
    threshold: impl Fn(f64) -> f64,
    value: impl Fn(f64) -> f64,
) -> ProfileFn {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(bps.len());
    for &(t, v) in bps {
        let (t, v) = (threshold(t), value(v));
        match out.last_mut() {
            Some(last) if last.0 == t => last.1 = v,
            _ => out.push((t, v)),
        }
    }
    ProfileFn::simplified(out)
}

/// A non-decreasing rescaling `β` for pullbacks.
#[derive(Clone, Debug, PartialEq)]
pub enum Rescale {
    Step(ProfileFn),
    /// `r ↦ slope·r + offset` with `slope > 0`, `offset ≥ 0`.
    Affine { slope: f64, offset: f64 },
}

impl Rescale {
    pub fn identity() -> Rescale {
        Rescale::Affine {
            slope: 1.0,
            offset: 0.0,
        }
    }

    pub fn affine(slope: f64, offset: f64) -> Result<Rescale, ProfileError> {
        if slope > 0.0 && slope.is_finite() && offset >= 0.0 && offset.is_finite() {
            Ok(Rescale::Affine { slope, offset })
        } else {
            Err(ProfileError::BadRescale)
        }
    }

    pub fn apply(&self, r: f64) -> f64 {
        match self {
            Rescale::Step(f) => f.eval(r),
            Rescale::Affine { slope, offset } => slope * r + offset,
        }
    }
}

/// `(α₀, …, α_k)` with `α₀` constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    fns: Vec<ProfileFn>,
}

impl Profile {
    pub fn new(fns: Vec<ProfileFn>) -> Result<Profile, ProfileError> {
        match fns.first() {
            None => Err(ProfileError::NoBreakpoints),
            Some(head) if !head.is_constant() => Err(ProfileError::NonConstantHead),
            Some(_) => Ok(Profile { fns }),
        }
    }

    /// A profile of constant functions.
    pub fn constants(values: &[f64]) -> Result<Profile, ProfileError> {
        Profile::new(values.iter().map(|&v| ProfileFn::constant(v)).collect())
    }

    pub fn fns(&self) -> &[ProfileFn] {
        &self.fns
    }

    /// `k`, the index of the last function.
    pub fn k(&self) -> usize {
        self.fns.len() - 1
    }

    pub fn head(&self) -> f64 {
        self.fns[0].breakpoints[0].1
    }

    /// `αᵢ(r)`; the argument is ignored for `i = 0`.
    pub fn eval(&self, i: usize, r: f64) -> Result<f64, ProfileError> {
        match self.fns.get(i) {
            Some(_) if i == 0 => Ok(self.head()),
            Some(f) => Ok(f.eval(r)),
            None => Err(ProfileError::IndexOutOfRange {
                index: i,
                len: self.fns.len(),
            }),
        }
    }

    /// Number of scale-0 pieces allowed for part `i`: `⌊αᵢ(r)⌋`.
    pub fn pieces(&self, i: usize, r: f64) -> Result<usize, ProfileError> {
        Ok(floor_nonneg(self.eval(i, r)?.max(0.0)) as usize)
    }

    /// `(1, α₀ − 1, α₁, …, α_k)`.
    pub fn normalize(&self) -> Result<Profile, ProfileError> {
        let head = self.head();
        if head < 1.0 {
            return Err(ProfileError::HeadBelowOne(format!("{head}")));
        }
        let mut fns = vec![ProfileFn::constant(1.0), ProfileFn::constant(head - 1.0)];
        fns.extend(self.fns[1..].iter().cloned());
        Ok(Profile { fns })
    }

    pub fn to_integral(&self) -> Profile {
        Profile {
            fns: self.fns.iter().map(ProfileFn::to_integral).collect(),
        }
    }

    pub fn from_integral(&self) -> Profile {
        Profile {
            fns: self.fns.iter().map(ProfileFn::from_integral).collect(),
        }
    }

    /// `(α₀ ∘ β, …, α_k ∘ β)`.
    pub fn pullback(&self, beta: &Rescale) -> Profile {
        Profile {
            fns: self.fns.iter().map(|f| f.compose(beta)).collect(),
        }
    }

    fn pair_tail(&self) -> Result<&ProfileFn, ProfileError> {
        if self.fns.len() == 2 && self.head() == 1.0 {
            Ok(&self.fns[1])
        } else {
            Err(ProfileError::WrongShape {
                len: self.fns.len(),
                head: format!("{}", self.head()),
            })
        }
    }

    /// `(1, α) ∪ (1, β) = (2, max(α, β))`.
    pub fn union(&self, other: &Profile) -> Result<Profile, ProfileError> {
        let (a, b) = (self.pair_tail()?, other.pair_tail()?);
        Profile::new(vec![ProfileFn::constant(2.0), a.max(b)])
    }

    /// `(1, α) × (1, β) = (2, αβ + α + β)`.
    pub fn product(&self, other: &Profile) -> Result<Profile, ProfileError> {
        let (a, b) = (self.pair_tail()?, other.pair_tail()?);
        Profile::new(vec![
            ProfileFn::constant(2.0),
            a.zip_with(b, |x, y| x * y + x + y),
        ])
    }
}

/// Which recurrence [`apc_schedule`] follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScheduleConvention {
    /// `t₀ = r_{p(0)}` with `p(0) = ⌊α₀⌋`, `cᵢ = ⌊αᵢ(t_{i−1})⌋`.
    #[default]
    Repaired,
    /// `s₁ = r_{α₀}`, `s_{i+1} = r_{p(i)}` with `p(i) = Σ_{j=1}^{i} ⌊αⱼ(sⱼ)⌋`,
    /// and `X₀` given the first scale `r₁` for lack of a definition.
    Literal,
}

/// Scales and slot assignment produced by [`apc_schedule`].
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub convention: ScheduleConvention,
    /// Piece count of each part.
    pub c: Vec<usize>,
    /// Running totals of `c`.
    pub p: Vec<usize>,
    /// Scale at which the pieces of part `i` are certified.
    pub t: Vec<f64>,
    /// `slots[j]` is the part filling slot `j + 1`.
    pub slots: Vec<usize>,
    /// `r₁, r₂, …` as given.
    pub required: Vec<f64>,
}

impl Schedule {
    /// `(slot, assigned scale, required scale)` for every slot.
    pub fn slot_scales(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .map(|(j, &part)| (j + 1, self.t[part], self.required[j]))
    }

    /// Every slot is served at a scale at least its requirement.
    pub fn valid(&self) -> bool {
        self.slot_scales().all(|(_, got, need)| got >= need)
    }
}

fn at(r_seq: &[f64], index: usize) -> Result<f64, ProfileError> {
    r_seq
        .get(index.max(1) - 1)
        .copied()
        .ok_or(ProfileError::SequenceTooShort {
            required: index,
            available: r_seq.len(),
        })
}

/// Assigns the pieces of an APD decomposition to the slots of a scale
/// sequence `r₁ ≤ r₂ ≤ …` (1-based), realising Asymptotic Property C.
pub fn apc_schedule(
    profile: &Profile,
    r_seq: &[f64],
    convention: ScheduleConvention,
) -> Result<Schedule, ProfileError> {
    if r_seq.iter().any(|&r| !(r > 0.0 && r.is_finite()))
        || r_seq.windows(2).any(|w| w[0] > w[1])
    {
        return Err(ProfileError::BadSequence);
    }
    let k = profile.k();
    let mut c = Vec::with_capacity(k + 1);
    let mut p = Vec::with_capacity(k + 1);
    let mut t = Vec::with_capacity(k + 1);
    let c0 = profile.pieces(0, 0.0)?;
    match convention {
        ScheduleConvention::Repaired => {
            c.push(c0);
            p.push(c0);
            t.push(at(r_seq, c0)?);
            for i in 1..=k {
                let ci = profile.pieces(i, t[i - 1])?;
                let pi = p[i - 1] + ci;
                c.push(ci);
                p.push(pi);
                t.push(at(r_seq, pi)?);
            }
        }
        ScheduleConvention::Literal => {
            c.push(c0);
            p.push(c0);
            t.push(at(r_seq, 1)?);
            let mut partial = 0;
            for i in 1..=k {
                let si = if i == 1 { at(r_seq, c0)? } else { at(r_seq, partial)? };
                let ci = profile.pieces(i, si)?;
                partial += ci;
                c.push(ci);
                p.push(p[i - 1] + ci);
                t.push(si);
            }
        }
    }
    let total = *p.last().unwrap_or(&0);
    if total > r_seq.len() {
        return Err(ProfileError::SequenceTooShort {
            required: total,
            available: r_seq.len(),
        });
    }
    let slots = c
        .iter()
        .enumerate()
        .flat_map(|(i, &ci)| core::iter::repeat_n(i, ci))
        .collect();
    Ok(Schedule {
        convention,
        c,
        p,
        t,
        slots,
        required: r_seq[..total].to_vec(),
    })
}

/// `α_i` of a family indexed by non-decreasing integer tuples of prior scales.
pub type FamilyFn<'a> = &'a dyn Fn(&[u64]) -> u64;

/// Integral profile from a family `αᵢ(r₀, …, r_{i−1})`:
/// `β₀ = α₀` and `β_{i+1}(r)` is the largest `α_{i+1}(r₀, …, rᵢ)` over
/// non-decreasing tuples with `rⱼ ≤ βⱼ(r)`.
///
/// Since `β₀` is constant, every `βᵢ` comes out constant.
pub fn uniformize(family: &[FamilyFn<'_>]) -> Result<Profile, ProfileError> {
    let Some(first) = family.first() else {
        return Err(ProfileError::NoBreakpoints);
    };
    let mut betas: Vec<u64> = vec![first(&[])];
    for alpha in &family[1..] {
        let mut best = 0;
        let mut tuple: Vec<u64> = Vec::with_capacity(betas.len());
        max_over_tuples(alpha, &betas, &mut tuple, &mut best);
        betas.push(best);
    }
    Profile::constants(&betas.iter().map(|&b| b as f64).collect::<Vec<_>>())
}

fn max_over_tuples(alpha: &FamilyFn<'_>, caps: &[u64], tuple: &mut Vec<u64>, best: &mut u64) {
    let j = tuple.len();
    if j == caps.len() {
        *best = (*best).max(alpha(tuple));
        return;
    }
    let lo = tuple.last().copied().unwrap_or(0);
    for v in lo..=caps[j] {
        tuple.push(v);
        max_over_tuples(alpha, caps, tuple, best);
        tuple.pop();
    }
}

/// A candidate decomposition `X₀, …, X_k`, each part given by its pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileInstance {
    pub scales: Vec<f64>,
    pub parts: Vec<Vec<Subset>>,
    /// Bound each piece of part `i` must respect at scale `scales[i]`.
    pub bounds: Vec<ExtReal>,
}

impl ProfileInstance {
    /// The instance for `normalize(p)` on scales `(r₀, r₁, …)`, built from an
    /// instance for `p` on `(r₁, …)`: the first piece of `X₀` becomes the new
    /// head, the rest the new second part.
    pub fn normalized(&self, r0: f64) -> ProfileInstance {
        let mut parts = self.parts.clone();
        let mut first = parts.remove(0);
        let rest = if first.is_empty() { Vec::new() } else { first.split_off(1) };
        let mut out = vec![first, rest];
        out.extend(parts);
        let mut scales = vec![r0];
        scales.extend(&self.scales);
        let mut bounds = vec![self.bounds[0]];
        bounds.extend(&self.bounds);
        ProfileInstance {
            scales,
            parts: out,
            bounds,
        }
    }
}

/// Checks a decomposition against a profile: the scales are non-decreasing,
/// the parts cover `X`, part `i` has at most `⌊αᵢ(r_{i−1})⌋` pieces and every
/// piece has scale-`rᵢ` components of diameter at most `bounds[i]`.
pub fn verify_profile_instance(
    space: &FiniteMetricSpace,
    profile: &Profile,
    instance: &ProfileInstance,
) -> DecompositionReport {
    let mut report = DecompositionReport::new();
    let k = profile.k();
    let shape = instance.scales.len() == k + 1
        && instance.parts.len() == k + 1
        && instance.bounds.len() == k + 1;
    report.verdict("profile.shape", shape);
    if !shape {
        return report;
    }
    let scales_ok = instance.scales.iter().all(|&r| r > 0.0 && r.is_finite())
        && instance.scales.windows(2).all(|w| w[0] <= w[1]);
    report.verdict("profile.scales", scales_ok);
    for (i, &r) in instance.scales.iter().enumerate() {
        report.scale(format!("r{i}"), r);
    }
    let mut all = Subset::empty(space.len());
    for pieces in &instance.parts {
        for piece in pieces {
            if piece.universe() == space.len() {
                all.union_with(piece);
            }
        }
    }
    report.verdict("profile.cover", all.is_full());
    if !scales_ok {
        return report;
    }
    for (i, pieces) in instance.parts.iter().enumerate() {
        let prev = if i == 0 { 0.0 } else { instance.scales[i - 1] };
        let allowed = profile.pieces(i, prev).unwrap_or(0);
        report.verdict(format!("profile.part{i}.pieces"), pieces.len() <= allowed);
        let graph = ScaleGraph::new(space, instance.scales[i]);
        let mut worst = ExtReal::ZERO;
        for (j, piece) in pieces.iter().enumerate() {
            let cert = graph.certificate(piece);
            worst = worst.max(cert.bound);
            report.part(format!("part{i}.piece{j}"), piece.clone(), Some(cert));
        }
        report.measure(format!("part{i}"), worst);
        report.verdict(format!("profile.part{i}.bounds"), worst <= instance.bounds[i]);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step() -> ProfileFn {
        ProfileFn::new(vec![(0.0, 2.0), (10.0, 5.0)]).unwrap()
    }

    #[test]
    fn step_evaluation() {
        assert_eq!(step().eval(7.0), 2.0);
        assert_eq!(step().eval(12.0), 5.0);
        assert_eq!(step().eval(10.0), 5.0);
        let late = ProfileFn::new(vec![(3.0, 1.0)]).unwrap();
        assert_eq!(late.eval(0.0), 1.0);
        assert_eq!(ProfileFn::new(vec![(0.0, 3.0), (1.0, 2.0)]), Err(ProfileError::Decreasing));
        assert_eq!(ProfileFn::new(vec![(1.0, 1.0), (1.0, 2.0)]), Err(ProfileError::UnsortedBreakpoints));
    }

    #[test]
    fn head_must_be_constant() {
        assert_eq!(Profile::new(vec![step()]), Err(ProfileError::NonConstantHead));
        let p = Profile::new(vec![ProfileFn::constant(1.0), step()]).unwrap();
        assert_eq!(p.eval(0, 1e9).unwrap(), 1.0);
        assert!(p.eval(2, 0.0).is_err());
    }

    #[test]
    fn normalisation() {
        let p = Profile::new(vec![ProfileFn::constant(3.0), step()]).unwrap();
        let n = p.normalize().unwrap();
        assert_eq!(n.fns(), [ProfileFn::constant(1.0), ProfileFn::constant(2.0), step()]);
        let twice = Profile::constants(&[2.0]).unwrap().normalize().unwrap().normalize().unwrap();
        assert_eq!(twice, Profile::constants(&[1.0, 0.0, 1.0]).unwrap());
        assert!(Profile::constants(&[0.5]).unwrap().normalize().is_err());
    }

    #[test]
    fn integral_conversion() {
        let f = ProfileFn::new(vec![(0.0, 1.0), (3.0, 2.7), (4.5, 4.2)]).unwrap();
        let i = f.to_integral();
        assert_eq!(i.breakpoints(), [(0.0, 1.0), (3.0, 2.0), (5.0, 4.0)]);
        let back = i.from_integral();
        for n in 0..10 {
            assert_eq!(back.eval(n as f64), i.eval(n as f64 + 1.0));
        }
    }

    #[test]
    fn pullback_by_doubling() {
        let p = Profile::new(vec![ProfileFn::constant(1.0), step()]).unwrap();
        let q = p.pullback(&Rescale::affine(2.0, 0.0).unwrap());
        assert_eq!(q.eval(1, 6.0).unwrap(), 5.0);
        assert_eq!(q.eval(1, 4.9).unwrap(), 2.0);
        assert_eq!(p.pullback(&Rescale::identity()), p);
    }

    #[test]
    fn union_and_product() {
        let two = Profile::constants(&[1.0, 2.0]).unwrap();
        let three = Profile::constants(&[1.0, 3.0]).unwrap();
        assert_eq!(two.union(&three).unwrap(), Profile::constants(&[2.0, 3.0]).unwrap());
        assert_eq!(two.product(&three).unwrap(), Profile::constants(&[2.0, 11.0]).unwrap());
        assert!(Profile::constants(&[2.0, 1.0]).unwrap().union(&two).is_err());
    }

    #[test]
    fn schedule_worked_example() {
        let p = Profile::constants(&[1.0, 2.0]).unwrap();
        let r: Vec<f64> = (1..=5).map(f64::from).collect();
        let s = apc_schedule(&p, &r, ScheduleConvention::Repaired).unwrap();
        assert_eq!((s.c.clone(), s.p.clone(), s.t.clone()), (vec![1, 2], vec![1, 3], vec![1.0, 3.0]));
        assert_eq!(s.slots, [0, 1, 1]);
        assert!(s.valid());
        assert!(matches!(
            apc_schedule(&p, &r[..2], ScheduleConvention::Repaired),
            Err(ProfileError::SequenceTooShort { required: 3, .. })
        ));
    }

    #[test]
    fn uniformize_identity_family() {
        let a0 = |_: &[u64]| 3;
        let a1 = |r: &[u64]| r[0];
        let p = uniformize(&[&a0, &a1]).unwrap();
        assert_eq!(p, Profile::constants(&[3.0, 3.0]).unwrap());
    }
}
