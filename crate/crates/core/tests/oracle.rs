//! Worked values frozen from hand or brute-force evaluation, and published
//! formula values.

use std::collections::VecDeque;
use std::sync::Arc;

use coarse_core::bricks::alternating_intervals;
use coarse_core::decompose::{
    check_union_bound, cross_dim0, outer_ring, perp_array, perp_split, refine_disjoint,
    truncated_product_decomposition, union_bound, check_refinement, asdim_matrix,
    verify_asdim_matrix,
};
use coarse_core::disjoint::{array_scale_disjoint, arrays_orthogonal, matrix_orthogonal, sets_scale_disjoint};
use coarse_core::product::{asymptotic_metric, is_c_discrete, reduced_metric, WeightFn};
use coarse_core::profile::{
    apc_schedule, uniformize, verify_profile_instance, Profile, ProfileFn, ProfileInstance, Rescale,
    ScheduleConvention,
};
use coarse_core::scale::{ball, chain_metric, components, components_norm, dim0_certificate};
use coarse_core::{
    ExtReal, FiniteMetricSpace, IndexSet, Norm, ScaleGraph, Subset, SubsetArray, SubsetMatrix,
};

fn set(n: usize, pts: impl IntoIterator<Item = usize>) -> Subset {
    Subset::from_indices(n, pts)
}

fn arr(n: usize, entries: &[&[usize]]) -> SubsetArray {
    SubsetArray::from_entries(n, entries.iter().map(|e| set(n, e.iter().copied())).collect()).unwrap()
}

fn fin(v: f64) -> ExtReal {
    ExtReal::finite(v)
}

/// Hop count by plain BFS over the witness-adjacency relation.
fn bfs_hops(space: &FiniteMetricSpace, r: f64, x: usize, y: usize) -> Option<usize> {
    let n = space.len();
    let adj = |a: usize, b: usize| (0..n).any(|z| space.dist(a, z).within(r) && space.dist(b, z).within(r));
    let mut seen = vec![None; n];
    seen[x] = Some(0);
    let mut q = VecDeque::from([x]);
    while let Some(a) = q.pop_front() {
        for b in 0..n {
            if seen[b].is_none() && adj(a, b) {
                seen[b] = Some(seen[a].unwrap() + 1);
                q.push_back(b);
            }
        }
    }
    seen[y]
}

#[test]
fn product_distance() {
    let i3 = Arc::new(FiniteMetricSpace::interval(3));
    let p = FiniteMetricSpace::product(i3.clone(), i3, Norm::L1);
    let (u, v) = (p.product_index(0, 0).unwrap(), p.product_index(2, 1).unwrap());
    assert_eq!(p.dist(u, v), fin(3.0));
}

#[test]
fn balls_and_chains() {
    let i10 = FiniteMetricSpace::interval(10);
    assert_eq!(ball(&i10, &set(10, [3]), 1.5).to_vec(), [2, 3, 4]);
    assert_eq!(chain_metric(&i10, 1.0, 0, 5), fin(3.0));
    assert_eq!(bfs_hops(&i10, 1.0, 0, 5), Some(3));
    for (x, y) in [(0, 9), (2, 7), (4, 4)] {
        assert_eq!(chain_metric(&i10, 1.0, x, y), fin(bfs_hops(&i10, 1.0, x, y).unwrap() as f64));
    }
}

#[test]
fn components_of_interval_sets() {
    let i10 = FiniteMetricSpace::interval(10);
    let a = set(10, [0, 1, 2, 6, 7]);
    let classes: Vec<Vec<usize>> = components(&i10, &a, 1.0).classes.iter().map(Subset::to_vec).collect();
    assert_eq!(classes, [vec![0, 1, 2], vec![6, 7]]);
    let pair: Vec<Vec<usize>> = components(&i10, &set(10, [4, 5]), 1.0).classes.iter().map(Subset::to_vec).collect();
    assert_eq!(pair, [vec![4, 5]]);
    assert_eq!(components_norm(&i10, &a, 1.0), fin(2.0));
    assert_eq!(components_norm(&i10, &Subset::full(10), 1.0), fin(9.0));
    let c = dim0_certificate(&i10, &a, 1.0);
    assert_eq!((c.scale, c.bound), (1.0, fin(2.0)));
    assert_eq!(dim0_certificate(&i10, &Subset::full(10), 1.0).bound, fin(9.0));
}

#[test]
fn array_operations() {
    let a = arr(10, &[&[0, 1], &[2, 3]]);
    let b = arr(10, &[&[1, 2], &[3, 4]]);
    assert_eq!(a.cap_dot(&b).unwrap().to_vec(), [1, 3]);
    let cover = arr(10, &[&[0, 1, 2, 3, 4], &[3, 4, 5, 6, 7, 8, 9]]);
    assert!(cover.set_norm().is_full());
    assert!(cover.is_cover());
    let capped = arr(10, &[&[0, 2], &[1, 3]]).scalar_cap(&set(10, [0, 1])).unwrap();
    assert_eq!(capped, arr(10, &[&[0], &[1]]));
    let i10 = FiniteMetricSpace::interval(10);
    let g = ScaleGraph::new(&i10, 1.5);
    assert_eq!(arr(10, &[&[3]]).ball(&g), arr(10, &[&[2, 3, 4]]));
}

/// Each entry expanded by hand from the definition
/// `(M ·∩ N)(s, r) = ⋃ₜ M(s, t) ∩ N(t, r)`.
#[test]
fn matrix_cap_product_by_expansion() {
    let m = SubsetMatrix::new(
        10,
        IndexSet::range(2),
        IndexSet::range(2),
        vec![set(10, [0, 1]), set(10, [2, 3]), set(10, [4, 5]), set(10, [6, 7])],
    )
    .unwrap();
    let n = SubsetMatrix::new(
        10,
        IndexSet::range(2),
        IndexSet::range(2),
        vec![set(10, [1]), set(10, [5]), set(10, [3]), set(10, [7])],
    )
    .unwrap();
    let p = m.matmul_cap(&n).unwrap();
    let got: Vec<Vec<usize>> = p.entries().iter().map(Subset::to_vec).collect();
    assert_eq!(got, [vec![1, 3], vec![], vec![], vec![5, 7]]);
}

#[test]
fn cross_products() {
    let i2 = Arc::new(FiniteMetricSpace::interval(2));
    let p = FiniteMetricSpace::product(i2.clone(), i2, Norm::L1);
    let a = arr(2, &[&[0], &[1]]);
    let diag = a.cross_dot(&a, &p).unwrap();
    assert_eq!(diag, set(4, [p.product_index(0, 0).unwrap(), p.product_index(1, 1).unwrap()]));
    let c = a.cartesian(&arr(2, &[&[0, 1]]), &p).unwrap();
    assert_eq!(c.get(0), &set(4, [p.product_index(0, 0).unwrap(), p.product_index(0, 1).unwrap()]));
    assert_eq!(c.get(1), &set(4, [p.product_index(1, 0).unwrap(), p.product_index(1, 1).unwrap()]));
}

#[test]
fn disjointness_examples() {
    let i10 = FiniteMetricSpace::interval(10);
    let g = ScaleGraph::new(&i10, 1.0);
    assert!(sets_scale_disjoint(&g, &set(10, [0, 1]), &set(10, [6, 7])));
    assert!(!sets_scale_disjoint(&g, &set(10, [0]), &set(10, [2])));
    assert!(array_scale_disjoint(&g, &arr(10, &[&[0, 1], &[6, 7]])));
    assert!(arrays_orthogonal(&g, &arr(10, &[&[0]]), &arr(10, &[&[9]])).unwrap());
    let far = SubsetMatrix::new(
        10,
        IndexSet::range(2),
        IndexSet::range(2),
        vec![set(10, [0]), Subset::empty(10), Subset::empty(10), set(10, [9])],
    )
    .unwrap();
    let o = matrix_orthogonal(&g, &far);
    assert!(o.columns_disjoint && o.rows_orthogonal && o.gram_diagonal);
    let overlapping = SubsetMatrix::new(
        10,
        IndexSet::range(2),
        IndexSet::range(1),
        vec![set(10, [3, 4]), set(10, [4, 5])],
    )
    .unwrap();
    let o = matrix_orthogonal(&g, &overlapping);
    assert!(!o.columns_disjoint && !o.rows_orthogonal && !o.gram_diagonal);
}

#[test]
fn rings_and_perpendicular_arrays() {
    let i61 = FiniteMetricSpace::interval(61);
    let g = ScaleGraph::new(&i61, 1.0);
    let zero = set(61, [0]);
    assert_eq!(outer_ring(&g, &zero, 0).to_vec(), [1, 2]);
    assert_eq!(outer_ring(&g, &zero, 1).to_vec(), [3, 4]);
    assert!(outer_ring(&g, &Subset::empty(61), 3).is_empty());
    assert_eq!(perp_array(&g, &zero, 1), arr(61, &[&[7, 8], &[13, 14]]));
    assert!(perp_array(&g, &Subset::empty(61), 2).entries().iter().all(Subset::is_empty));

    let y = set(61, (0..5).chain(30..35));
    let z = arr(61, &[&[10, 11, 12], &[40, 41, 42]]);
    let yperp = perp_array(&g, &y, 1);
    let split = perp_split(&y, &z, &yperp).unwrap();
    for i in 0..2 {
        assert!(y.is_subset(split.outer.get(i)));
        assert_eq!(split.inner.get(i).union(split.outer.get(i)), y.union(z.get(i)));
    }
}

#[test]
fn union_bound_values() {
    assert_eq!(union_bound(2.0, 3.0, 1.0), 7.0);
    assert_eq!(union_bound(0.0, 0.0, 2.5), 5.0);
    let i20 = FiniteMetricSpace::interval(20);
    let c = check_union_bound(&i20, &set(20, [0, 1, 2]), &set(20, [10]), 1.0);
    assert!(c.holds());
    assert_eq!(c.measured, fin(2.0));
}

/// `A` has two 1-components of diameter 2 and `B` is one point sitting
/// between them, so `M = 2`, `s = 0` and `M + s + 2r = 4`, while `A ∪ B` is a
/// single 1-component of diameter 8.
#[test]
fn union_bound_counterexample() {
    let i10 = FiniteMetricSpace::interval(10);
    let c = check_union_bound(&i10, &set(10, [0, 1, 2, 6, 7, 8]), &set(10, [4]), 1.0);
    assert_eq!((c.m, c.s, c.bound, c.measured), (fin(2.0), fin(0.0), fin(4.0), fin(8.0)));
    assert!(!c.holds());
    assert!(c.corrected_holds());
}

#[test]
fn asdim_on_i64() {
    let i64s = FiniteMetricSpace::interval(64);
    let parts = SubsetArray::from_entries(64, alternating_intervals(64, 18).to_vec()).unwrap();
    let m = asdim_matrix(&i64s, &parts, 2.0, 2).unwrap();
    assert_eq!(m.matrix.shape(), (2, 2));
    assert!(verify_asdim_matrix(&i64s, &m, 2.0).passed());
    let single = SubsetArray::from_entries(64, vec![Subset::full(64)]).unwrap();
    let one = asdim_matrix(&i64s, &single, 2.0, 1).unwrap();
    assert_eq!(one.matrix.cols().labels(), ["b"]);
}

#[test]
fn refine_clusters() {
    let i61 = FiniteMetricSpace::interval(61);
    let xset = set(61, [0, 1, 20, 21, 40, 41]);
    let cert = dim0_certificate(&i61, &xset, 1.0);
    assert_eq!(cert.bound, fin(1.0));
    let f = refine_disjoint(&i61, &xset, cert, 5.0).unwrap();
    assert_eq!(f.parts.set_norm(), xset);
    assert!(array_scale_disjoint(&ScaleGraph::new(&i61, 1.0), &f.parts));
    assert!(check_refinement(&i61, &xset, &f).passed());
}

#[test]
fn cross_certificate_example() {
    let i10 = Arc::new(FiniteMetricSpace::interval(10));
    let p = FiniteMetricSpace::product(i10.clone(), i10, Norm::L1);
    let c = cross_dim0(&p, &arr(10, &[&[0], &[9]]), &arr(10, &[&[0, 1], &[8, 9]]), 1.0).unwrap();
    assert!(c.measured.bound <= fin(1.0));
    assert_eq!(c.predicted, fin(1.0));
}

#[test]
fn truncated_scaled_intervals() {
    let factors: Vec<_> = (1..=3)
        .map(|i| Arc::new(FiniteMetricSpace::scaled_interval(8, 2.0 * i as f64)))
        .collect();
    let t = truncated_product_decomposition(&factors, 2.0, 8.0, 3, Norm::L1, None).unwrap();
    assert!(t.report.passed(), "{:?}", t.report.failures());
}

#[test]
fn profile_values() {
    let n = Profile::constants(&[1.0, 4.0]).unwrap();
    assert_eq!(n.eval(1, 123.0).unwrap(), 4.0);
    let step = ProfileFn::new(vec![(0.0, 2.0), (10.0, 5.0)]).unwrap();
    assert_eq!((step.eval(7.0), step.eval(12.0)), (2.0, 5.0));
    let with_step = Profile::new(vec![ProfileFn::constant(3.0), step.clone()]).unwrap();
    assert_eq!(
        with_step.normalize().unwrap(),
        Profile::new(vec![ProfileFn::constant(1.0), ProfileFn::constant(2.0), step.clone()]).unwrap()
    );
    let two = Profile::constants(&[2.0]).unwrap().normalize().unwrap();
    assert_eq!(two, Profile::constants(&[1.0, 1.0]).unwrap());
    assert_eq!(two.normalize().unwrap(), Profile::constants(&[1.0, 0.0, 1.0]).unwrap());
    let frac = ProfileFn::new(vec![(0.0, 1.0), (3.0, 2.7)]).unwrap();
    assert_eq!(frac.to_integral().eval(3.0), 2.0);
    let pulled = Profile::new(vec![ProfileFn::constant(1.0), step]).unwrap().pullback(&Rescale::affine(2.0, 0.0).unwrap());
    assert_eq!(pulled.eval(1, 6.0).unwrap(), 5.0);
}

#[test]
fn published_profile_formulas() {
    let c = |v: &[f64]| Profile::constants(v).unwrap();
    assert_eq!(c(&[1.0, 2.0]).union(&c(&[1.0, 3.0])).unwrap(), c(&[2.0, 3.0]));
    assert_eq!(c(&[1.0, 2.0]).product(&c(&[1.0, 3.0])).unwrap(), c(&[2.0, 11.0]));
    let a = Profile::new(vec![ProfileFn::constant(1.0), ProfileFn::new(vec![(0.0, 1.0), (4.0, 3.0)]).unwrap()]).unwrap();
    let b = Profile::new(vec![ProfileFn::constant(1.0), ProfileFn::new(vec![(0.0, 2.0), (6.0, 2.0)]).unwrap()]).unwrap();
    let u = a.union(&b).unwrap();
    for r in [0.0, 3.0, 4.0, 5.0, 6.0, 9.0] {
        assert_eq!(u.eval(1, r).unwrap(), a.eval(1, r).unwrap().max(b.eval(1, r).unwrap()));
        let (x, y) = (a.eval(1, r).unwrap(), b.eval(1, r).unwrap());
        assert_eq!(a.product(&b).unwrap().eval(1, r).unwrap(), x * y + x + y);
    }
}

#[test]
fn schedule_worked_example() {
    let p = Profile::constants(&[1.0, 2.0]).unwrap();
    let r: Vec<f64> = (1..=6).map(f64::from).collect();
    let s = apc_schedule(&p, &r, ScheduleConvention::Repaired).unwrap();
    assert_eq!((s.c.as_slice(), s.p.as_slice(), s.t.as_slice()), (&[1, 2][..], &[1, 3][..], &[1.0, 3.0][..]));
    let slots: Vec<(f64, f64)> = s.slot_scales().map(|(_, got, need)| (got, need)).collect();
    assert_eq!(slots, [(1.0, 1.0), (3.0, 2.0), (3.0, 3.0)]);
    assert!(s.valid());
}

#[test]
fn uniformize_identity() {
    let a0 = |_: &[u64]| 2;
    let a1 = |r: &[u64]| r[0];
    assert_eq!(uniformize(&[&a0, &a1]).unwrap(), Profile::constants(&[2.0, 2.0]).unwrap());
}

#[test]
fn profile_instances() {
    let i40 = FiniteMetricSpace::interval(40);
    let [even, odd] = alternating_intervals(40, 8);
    let ok = ProfileInstance {
        scales: vec![1.0, 2.0],
        parts: vec![vec![even], vec![odd]],
        bounds: vec![fin(7.0), fin(7.0)],
    };
    assert!(verify_profile_instance(&i40, &Profile::constants(&[1.0, 1.0]).unwrap(), &ok).passed());

    let clusters = FiniteMetricSpace::interval(22).subspace(&set(22, [0, 1, 20, 21]));
    let bad = ProfileInstance {
        scales: vec![100.0, 100.0],
        parts: vec![vec![Subset::full(4)], vec![]],
        bounds: vec![fin(1.0), fin(0.0)],
    };
    let report = verify_profile_instance(&clusters, &Profile::constants(&[1.0, 0.0]).unwrap(), &bad);
    assert!(!report.passed());
    assert_eq!(report.failures(), ["profile.part0.bounds"]);
}

#[test]
fn weighted_product_metrics() {
    let f = vec![FiniteMetricSpace::interval(5), FiniteMetricSpace::interval(5)];
    let w = WeightFn::new(vec![1.0, 2.0]).unwrap();
    assert_eq!(asymptotic_metric(&f, &w, &[0, 0], &[1, 3]), fin(4.0));
    assert_eq!(reduced_metric(&f, &w, &[0, 0], &[1, 3]), fin(7.0));
    assert!(is_c_discrete(&FiniteMetricSpace::interval(10), 1.0));
}
