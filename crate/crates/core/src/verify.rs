//! Built-in verification suites: randomized identities between independent
//! computation routes, plus the classical degree anchors. Each suite
//! returns a per-case report; a failing case carries a counterexample
//! dump. Suites are deterministic given a seed.

use crate::bundle::{LineBundleClass, VectorBundleData};
use crate::flag::{
    push, push_projective, push_quadric, push_with_variant, Family, FlagSpec, PushOptions, Variant,
};
use crate::laurent::{det_extract, laurent_determinant, staged_extract, LaurentPoly};
use crate::oracle::{
    brute_force_coeff, classical_degree, localization_push_grassmann, Space, SplitBundle,
};
use crate::ring::{Homogeneity, RingDescriptor, RingElement};
use crate::sample;
use crate::schur::{
    antisym_extract_lemma_check, complete_homogeneous, jacobi_trudi, push_monomials,
    push_schur_grassmann_a, push_schur_isotropic, schur_bialternant,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Default seed for all randomized suites, also used by the CLI.
pub const DEFAULT_SEED: u64 = 20160309;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ring,
    Extraction,
    LemmaEj,
    Oracle,
    Degrees,
    CrossPath,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Ring,
        Suite::Extraction,
        Suite::LemmaEj,
        Suite::Oracle,
        Suite::Degrees,
        Suite::CrossPath,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ring => "ring",
            Suite::Extraction => "extraction",
            Suite::LemmaEj => "lemma-ej",
            Suite::Oracle => "oracle",
            Suite::Degrees => "degrees",
            Suite::CrossPath => "cross-path",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
}

struct Recorder {
    cases: Vec<CaseResult>,
}

impl Recorder {
    fn new() -> Recorder {
        Recorder { cases: Vec::new() }
    }

    fn check_eq<T: PartialEq + std::fmt::Display>(
        &mut self,
        name: impl Into<String>,
        left: &T,
        right: &T,
    ) {
        let passed = left == right;
        self.cases.push(CaseResult {
            name: name.into(),
            passed,
            detail: if passed {
                None
            } else {
                Some(format!("left = {left}, right = {right}"))
            },
        });
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        let detail = detail.into();
        self.cases.push(CaseResult {
            name: name.into(),
            passed,
            detail: if passed || detail.is_empty() {
                None
            } else {
                Some(detail)
            },
        });
    }
}

/// Runs one suite with the given seed and case budget.
pub fn run_suite(suite: Suite, seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut recorder = Recorder::new();
    match suite {
        Suite::Ring => suite_ring(&mut recorder, &mut rng, cases),
        Suite::Extraction => suite_extraction(&mut recorder, &mut rng, cases),
        Suite::LemmaEj => suite_lemma_ej(&mut recorder, &mut rng, cases),
        Suite::Oracle => suite_oracle(&mut recorder, &mut rng, cases),
        Suite::Degrees => suite_degrees(&mut recorder),
        Suite::CrossPath => suite_cross_path(&mut recorder, &mut rng, cases),
    }
    SuiteReport {
        suite: suite.name(),
        cases: recorder.cases,
    }
}

fn sample_ring(rng: &mut impl Rng) -> Arc<RingDescriptor> {
    let layouts: [Vec<(&str, u32)>; 3] = [
        vec![("a", 1)],
        vec![("a", 1), ("b", 2)],
        vec![("a", 1), ("b", 1), ("c", 2)],
    ];
    let layout = &layouts[rng.gen_range(0..layouts.len())];
    let truncation = rng.gen_range(2..=5u32);
    RingDescriptor::new(
        layout.iter().map(|(n, d)| (n.to_string(), *d)).collect(),
        truncation,
    )
    .expect("valid layout")
}

fn suite_ring(recorder: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) {
    for case in 0..cases {
        let ring = sample_ring(rng);
        let a = sample::random_element(&ring, 4, rng);
        let b = sample::random_element(&ring, 4, rng);
        let c = sample::random_element(&ring, 4, rng);
        let one = RingElement::one(&ring);

        recorder.check_eq(
            format!("add-associativity #{case}"),
            &(&(&a + &b) + &c),
            &(&a + &(&b + &c)),
        );
        recorder.check_eq(
            format!("mul-associativity #{case}"),
            &(&(&a * &b) * &c),
            &(&a * &(&b * &c)),
        );
        recorder.check_eq(format!("mul-commutativity #{case}"), &(&a * &b), &(&b * &a));
        recorder.check_eq(
            format!("distributivity #{case}"),
            &(&a * &(&b + &c)),
            &(&(&a * &b) + &(&a * &c)),
        );
        recorder.check_eq(format!("unit #{case}"), &(&a * &one), &a);

        // truncation is a ring congruence: computing in a higher-precision
        // ring and truncating agrees with computing in the truncated ring
        let wide = ring.with_truncation(ring.truncation() + 3);
        let wa = sample::random_element(&wide, 4, rng);
        let wb = sample::random_element(&wide, 4, rng);
        recorder.check_eq(
            format!("truncation-congruence #{case}"),
            &(&wa * &wb).map_to(&ring),
            &(&wa.map_to(&ring) * &wb.map_to(&ring)),
        );

        // every element is the sum of its grade components
        let mut regraded = RingElement::zero(&ring);
        for k in 0..=ring.truncation() {
            regraded = &regraded + &a.grade_component(k);
        }
        recorder.check_eq(format!("grade-decomposition #{case}"), &regraded, &a);
    }
}

fn suite_extraction(recorder: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) {
    for case in 0..cases {
        let ring = sample_ring(rng);
        let d = rng.gen_range(1..=3usize);
        let factor_count = rng.gen_range(1..=4usize);
        let factors: Vec<LaurentPoly> = (0..factor_count)
            .map(|_| sample::random_laurent(&ring, d, 4, -2..=3, rng))
            .collect();
        let refs: Vec<&LaurentPoly> = factors.iter().collect();
        let target: Vec<u32> = (0..d).map(|_| rng.gen_range(0..=4u32)).collect();
        let signed: Vec<i32> = target.iter().map(|&e| e as i32).collect();
        recorder.check_eq(
            format!("staged-vs-brute #{case}"),
            &staged_extract(&refs, &target),
            &brute_force_coeff(&refs, &signed),
        );

        // shifting rule on a random monomial shift
        let f = &factors[0];
        let shift: Vec<i32> = (0..d).map(|_| rng.gen_range(-2..=2i32)).collect();
        let shifted_target: Vec<i32> = signed.iter().zip(&shift).map(|(a, b)| a + b).collect();
        recorder.check_eq(
            format!("shifting-rule #{case}"),
            &f.shift(&shift).coeff(&shifted_target),
            &f.coeff(&signed),
        );

        // linearity over base scalars
        let g = sample::random_laurent(&ring, d, 4, -2..=3, rng);
        let alpha = sample::random_element(&ring, 2, rng);
        let beta = sample::random_element(&ring, 2, rng);
        let combined = &f.mul_coefficient(&alpha) + &g.mul_coefficient(&beta);
        recorder.check_eq(
            format!("linearity #{case}"),
            &combined.coeff(&signed),
            &(&(&alpha * &f.coeff(&signed)) + &(&beta * &g.coeff(&signed))),
        );
    }
}

fn suite_lemma_ej(recorder: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) {
    for case in 0..cases {
        let ring = sample_ring(rng);
        let d = rng.gen_range(1..=3usize);

        // det_extract against the expanded determinant
        let matrix: Vec<Vec<LaurentPoly>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|j| {
                        let mut entry = LaurentPoly::zero(&ring, d);
                        for _ in 0..rng.gen_range(1..=3usize) {
                            let mut exponents = vec![0i32; d];
                            exponents[j] = rng.gen_range(0..=3);
                            let coefficient =
                                RingElement::constant(&ring, rng.gen_range(-3i64..=3));
                            entry = &entry + &LaurentPoly::monomial(coefficient, &exponents);
                        }
                        entry
                    })
                    .collect()
            })
            .collect();
        let target: Vec<u32> = (0..d).map(|_| rng.gen_range(0..=3u32)).collect();
        let signed: Vec<i32> = target.iter().map(|&e| e as i32).collect();
        let via_entries = det_extract(&matrix, &target).expect("single-variable entries");
        let expanded = laurent_determinant(&matrix).coeff(&signed);
        recorder.check_eq(format!("det-extract #{case}"), &via_entries, &expanded);

        // antisymmetric staircase extraction identity
        let antisymmetric = sample::random_antisymmetric(&ring, d, 6, rng);
        let e = rng.gen_range(d as i64 - 1..=d as i64 + 4);
        match antisym_extract_lemma_check(&antisymmetric, e) {
            Ok((lhs, rhs)) => {
                recorder.check_eq(format!("staircase-lemma #{case} (e={e})"), &lhs, &rhs)
            }
            Err(error) => recorder.check(
                format!("staircase-lemma #{case} (e={e})"),
                false,
                format!("sampler produced a rejected input: {error}"),
            ),
        }
    }
}

fn suite_oracle(recorder: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) {
    // sign anchor first: the oracle must reproduce the Segre classes
    for n in 2..=5usize {
        let split = SplitBundle::new(n, 3);
        let segre = split.bundle().segre(split.ring());
        let t = LaurentPoly::variable(split.ring(), 1, 0);
        for i in 0..=3i64 {
            let f = t.pow((i + n as i64 - 1) as u32);
            let via_oracle =
                localization_push_grassmann(&split, 1, &f).expect("symmetric one-variable");
            recorder.check_eq(
                format!("segre-anchor n={n} i={i}"),
                &via_oracle,
                &segre.get(i),
            );
        }
    }

    for case in 0..cases {
        let n = rng.gen_range(2..=5usize);
        let d = rng.gen_range(1..=3.min(n - 1));
        let truncation = rng.gen_range(2..=5u32);
        let split = SplitBundle::new(n, truncation);
        let ring = split.ring();
        let spec = FlagSpec::new(
            ring.clone(),
            Family::A,
            split.bundle(),
            None,
            vec![d as u32],
        )
        .expect("d < n is valid for family A");
        let f = sample::random_symmetric_poly(ring, d, truncation, rng);
        let via_oracle =
            localization_push_grassmann(&split, d, &f).expect("symmetric by construction");
        let via_engine = push(&spec, &f, &PushOptions::default()).expect("valid integrand");
        recorder.check_eq(
            format!("localization-vs-engine #{case} (n={n}, d={d})"),
            &via_oracle,
            &via_engine,
        );
    }
}

/// Push of `(sum xi)^exponent` for a trivial bundle over a point; the
/// engine side of the classical degree table.
pub fn degree_over_point(family: Family, rank: u32, d: u32, exponent: u32) -> RingElement {
    let ring = RingDescriptor::new(vec![], 0).expect("point ring");
    let bundle = VectorBundleData::trivial("E", rank);
    let spec = FlagSpec::new(ring.clone(), family, bundle, None, vec![d]).expect("valid spec");
    let mut sum = LaurentPoly::zero(&ring, d as usize);
    for i in 0..d as usize {
        sum = &sum + &LaurentPoly::variable(&ring, d as usize, i);
    }
    push(&spec, &sum.pow(exponent), &PushOptions::default()).expect("valid integrand")
}

fn suite_degrees(recorder: &mut Recorder) {
    let constant = |value: BigInt| -> String { value.to_string() };

    // P^n: rank n+1, d = 1, hyperplane power n
    for n in 1..=4u32 {
        let engine = degree_over_point(Family::A, n + 1, 1, n);
        recorder.check_eq(
            format!("projective({n})"),
            &engine.to_string(),
            &constant(classical_degree(Space::Projective { n })),
        );
    }
    // Grassmannians via (sum xi)^{d(n-d)}
    for (d, n) in [(2u32, 4u32), (2, 5), (3, 6)] {
        let engine = degree_over_point(Family::A, n, d, d * (n - d));
        recorder.check_eq(
            format!("grassmann({d},{n})"),
            &engine.to_string(),
            &constant(classical_degree(Space::Grassmann { d, n })),
        );
    }
    // Lagrangian Grassmannians via (sum xi)^{n(n+1)/2}
    for n in [2u32, 3] {
        let engine = degree_over_point(Family::C, 2 * n, n, n * (n + 1) / 2);
        recorder.check_eq(
            format!("lagrangian({n})"),
            &engine.to_string(),
            &constant(classical_degree(Space::Lagrangian { n })),
        );
    }
    // quadric hypersurfaces: xi^{rank-2}
    for rank in [4u32, 5, 6, 7] {
        let engine = degree_over_point(Family::BD, rank, 1, rank - 2);
        recorder.check_eq(
            format!("quadric({rank})"),
            &engine.to_string(),
            &constant(classical_degree(Space::Quadric { rank })),
        );
    }
}

fn sample_family_spec(
    family: Family,
    ring: &Arc<RingDescriptor>,
    multi_block: bool,
    rng: &mut ChaCha8Rng,
) -> FlagSpec {
    let (rank, d_max) = match family {
        Family::A => {
            let rank = rng.gen_range(3..=8u32);
            (rank, (rank - 1).min(3))
        }
        Family::C => {
            let n = rng.gen_range(2..=4u32);
            (2 * n, n.min(3))
        }
        Family::BD => {
            let rank = rng.gen_range(4..=8u32);
            (rank, (rank / 2).min(3))
        }
    };
    let d = rng.gen_range(1..=d_max);
    let mut dims = vec![d];
    if multi_block && d > 1 && rng.gen_bool(0.5) {
        dims.insert(0, rng.gen_range(1..d));
    }
    let bundle = sample::random_bundle(ring, "E", rank, rng);
    FlagSpec::new(ring.clone(), family, bundle, None, dims).expect("valid by construction")
}

fn suite_cross_path(recorder: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) {
    for case in 0..cases {
        let ring = sample_ring(rng);
        for family in [Family::A, Family::C, Family::BD] {
            // multi-block flags exercise the block structure of exponents
            // and shifts; the Schur comparisons below need a single step
            let spec = sample_family_spec(family, &ring, true, rng);
            let d = spec.d();

            // determinantal monomial path against the extraction engine
            let terms = sample::random_monomial_terms(&ring, d, rng.gen_range(1..=3), 7, rng);
            let f = sample::monomials_to_poly(&ring, d, &terms);
            let via_det = push_monomials(&spec, &terms).expect("trivial line");
            let via_extraction = push(&spec, &f, &PushOptions::default()).expect("polynomial");
            recorder.check_eq(
                format!("monomials-{} #{case}", family.as_str()),
                &via_det,
                &via_extraction,
            );

            // degree law: homogeneous integrand pushes to degree
            // g - fiber_dimension (or zero)
            let fiber = spec.fiber_dimension(spec.auto_variant()).expect("valid");
            let g = rng.gen_range(fiber..=fiber + ring.truncation());
            let f = random_homogeneous_integrand(&ring, d, g, rng);
            let result = push(&spec, &f, &PushOptions::default()).expect("polynomial");
            let degree_ok = match result.homogeneity() {
                Homogeneity::Zero => true,
                Homogeneity::Homogeneous(got) => got == g - fiber,
                Homogeneity::Mixed => false,
            };
            recorder.check(
                format!("degree-law-{} #{case}", family.as_str()),
                degree_ok,
                format!("push of degree {g} not homogeneous of degree {}", g - fiber),
            );

            // base-scalar linearity
            let alpha = sample::random_element(&ring, 2, rng);
            let scaled = push(&spec, &f.mul_coefficient(&alpha), &PushOptions::default())
                .expect("polynomial");
            recorder.check_eq(
                format!("base-linearity-{} #{case}", family.as_str()),
                &scaled,
                &(&alpha * &result),
            );

            // Schur integrands on single-step specs; family A partitions
            // fit the d x (n - d) box, the isotropic ones roam wider
            let spec = sample_family_spec(family, &ring, false, rng);
            let d = spec.d();
            let n_bound = match family {
                Family::A => spec.bundle().rank() as i64 - d as i64,
                Family::C | Family::BD => spec.bundle().rank() as i64,
            };
            let lambda = sample::random_partition(d, n_bound.max(1), rng);
            let schur = schur_bialternant(&ring, &lambda).expect("partition");
            let via_extraction = push(&spec, &schur, &PushOptions::default()).expect("polynomial");
            let via_schur = match family {
                Family::A => push_schur_grassmann_a(spec.bundle(), &ring, d, &lambda)
                    .expect("valid dimensions"),
                Family::C | Family::BD => {
                    push_schur_isotropic(&spec, &lambda).expect("single step, trivial line")
                }
            };
            recorder.check_eq(
                format!("schur-{} #{case}", family.as_str()),
                &via_schur,
                &via_extraction,
            );
        }

        // d = 1 specializations
        let ring = sample_ring(rng);
        let rank = rng.gen_range(2..=6u32);
        let bundle = sample::random_bundle(&ring, "E", rank, rng);
        let t = LaurentPoly::variable(&ring, 1, 0);
        let f = t.pow(rng.gen_range(0..=6));
        let spec_a = FlagSpec::new(ring.clone(), Family::A, bundle.clone(), None, vec![1])
            .expect("d=1 valid");
        recorder.check_eq(
            format!("projective-specialization #{case}"),
            &push(&spec_a, &f, &PushOptions::default()).expect("polynomial"),
            &push_projective(&f, &bundle, &ring),
        );
        if rank % 2 == 0 {
            let spec_c = FlagSpec::new(ring.clone(), Family::C, bundle.clone(), None, vec![1])
                .expect("d=1 valid");
            recorder.check_eq(
                format!("symplectic-d1-specialization #{case}"),
                &push(&spec_c, &f, &PushOptions::default()).expect("polynomial"),
                &push_projective(&f, &bundle, &ring),
            );
        }
        if rank >= 2 {
            let ell = sample::random_homogeneous(&ring, 1, 2, rng);
            let line = LineBundleClass::new(ell).expect("degree 1");
            let spec_bd = FlagSpec::new(
                ring.clone(),
                Family::BD,
                bundle.clone(),
                Some(line.clone()),
                vec![1],
            )
            .expect("d=1 valid");
            recorder.check_eq(
                format!("quadric-specialization #{case}"),
                &push(&spec_bd, &f, &PushOptions::default()).expect("polynomial"),
                &push_quadric(&f, &bundle, &line, &ring),
            );
        }

        // both B/D kernel forms agree for a trivial line class
        let rank = rng.gen_range(4..=8u32);
        let bundle = sample::random_bundle(&ring, "E", rank, rng);
        let d = rng.gen_range(1..=(rank / 2).min(3));
        let spec = FlagSpec::new(ring.clone(), Family::BD, bundle, None, vec![d]).expect("valid");
        let f = sample::monomials_to_poly(
            &ring,
            d as usize,
            &sample::random_monomial_terms(&ring, d as usize, 2, 6, rng),
        );
        recorder.check_eq(
            format!("bd-variant-agreement #{case}"),
            &push_with_variant(&spec, &f, Variant::Standard).expect("polynomial"),
            &push_with_variant(&spec, &f, Variant::OrthogonalTrivialLine).expect("polynomial"),
        );

        // self-dual bundles kill odd-entry shifted sequences
        let n = rng.gen_range(2..=3u32);
        let bundle = sample::random_self_dual_bundle(&ring, "E", 2 * n, rng);
        let d = rng.gen_range(1..=n.min(3));
        let spec = FlagSpec::new(ring.clone(), Family::C, bundle, None, vec![d]).expect("valid");
        let mu: Vec<i64> = (1..=d as i64)
            .map(|i| 2 * n as i64 - d as i64 + 1 - i)
            .collect();
        let mut lambda = mu.clone();
        lambda[0] += 1 + 2 * rng.gen_range(0..=1i64); // odd offset in one entry
        let pushed = push_schur_isotropic(&spec, &lambda).expect("trivial line");
        recorder.check(
            format!("self-dual-odd-vanishing #{case}"),
            pushed.is_zero(),
            format!("expected zero, got {pushed}"),
        );

        // block-symmetry stability: permuting variables of a symmetric
        // integrand within the block leaves the push-forward unchanged
        let spec = sample_family_spec(Family::A, &ring, false, rng);
        let d = spec.d();
        let f = sample::random_symmetric_poly(&ring, d, ring.truncation(), rng);
        if d >= 2 {
            let permuted = f.swap_vars(0, d - 1);
            recorder.check_eq(
                format!("block-symmetry-stability #{case}"),
                &push(&spec, &permuted, &PushOptions::default()).expect("polynomial"),
                &push(&spec, &f, &PushOptions::default()).expect("polynomial"),
            );
        }

        // bialternant agrees with Jacobi-Trudi in complete homogeneous
        // functions after evaluating at degree-1 generators
        let ring = RingDescriptor::new(vec![("x".into(), 1), ("y".into(), 1), ("z".into(), 1)], 4)
            .expect("valid");
        let d = rng.gen_range(1..=3usize);
        let lambda = sample::random_partition(d, 4, rng);
        let values: Vec<RingElement> = (0..d).map(|i| RingElement::generator(&ring, i)).collect();
        let via_bialternant = schur_bialternant(&ring, &lambda)
            .expect("partition")
            .eval_at(&values);
        let via_jacobi_trudi = jacobi_trudi(&lambda, |k| {
            if k < 0 {
                RingElement::zero(&ring)
            } else {
                complete_homogeneous(&ring, d, k as u32).eval_at(&values)
            }
        });
        recorder.check_eq(
            format!("bialternant-vs-jacobi-trudi #{case}"),
            &via_bialternant,
            &via_jacobi_trudi,
        );
    }
}

fn random_homogeneous_integrand(
    ring: &Arc<RingDescriptor>,
    d: usize,
    degree: u32,
    rng: &mut ChaCha8Rng,
) -> LaurentPoly {
    let mut out = LaurentPoly::zero(ring, d);
    for _ in 0..rng.gen_range(1..=3usize) {
        let coefficient_degree = rng.gen_range(0..=degree.min(ring.truncation()));
        let coefficient = sample::random_homogeneous(ring, coefficient_degree, 2, rng);
        if coefficient.is_zero() {
            continue;
        }
        let mut t_degree = degree - coefficient_degree;
        let mut exponents = vec![0i32; d];
        for slot in exponents.iter_mut().take(d - 1) {
            let take = rng.gen_range(0..=t_degree);
            *slot = take as i32;
            t_degree -= take;
        }
        exponents[d - 1] = t_degree as i32;
        out = &out + &LaurentPoly::monomial(coefficient, &exponents);
    }
    out
}
