//! The six three-orbit cases: invariant lattices inside the Niemeier lattice
//! with root system `A1^24`, their complements, the glued lattices `S`, and
//! the supersingular Néron–Severi lattices they are compared against.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enumeration::{min_norm, vectors_with_norm};
use crate::error::{Error, Result};
use crate::fqf::{Fqf, FqfElement, FqfRecord, IsoOutcome};
use crate::golay::{
    build_golay, build_niemeier, mask_of, points_of, GolayCode, NiemeierA1, LENGTH,
};
use crate::lattice::{
    discriminant_form, glue_overlattice, l_invariant, root_lattice, DiscriminantForm, GlueSpec,
    Lattice, RootKind, Sublattice,
};
use crate::linalg::{IntMatrix, Signature};

/// Maximal subgroups of `M23` with three orbits on the 24 points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    M22,
    L34,
    A7,
    A8,
    M11,
    A5x3,
}

impl Case {
    pub const ALL: [Case; 6] = [
        Case::M22,
        Case::L34,
        Case::A7,
        Case::A8,
        Case::M11,
        Case::A5x3,
    ];

    /// Short label used on the command line and in reports.
    pub fn label(self) -> &'static str {
        match self {
            Case::M22 => "M22",
            Case::L34 => "L34",
            Case::A7 => "A7",
            Case::A8 => "A8",
            Case::M11 => "M11",
            Case::A5x3 => "A5x3",
        }
    }

    pub fn group_name(self) -> &'static str {
        match self {
            Case::M22 => "M22",
            Case::L34 => "L3(4):2",
            Case::A7 => "2^4:A7",
            Case::A8 => "A8",
            Case::M11 => "M11",
            Case::A5x3 => "2^4:(3xA5):2",
        }
    }

    pub fn orbit_sizes(self) -> [usize; 3] {
        match self {
            Case::M22 => [1, 1, 22],
            Case::L34 => [1, 2, 21],
            Case::A7 => [1, 7, 16],
            Case::A8 => [1, 8, 15],
            Case::M11 => [1, 11, 12],
            Case::A5x3 => [1, 3, 20],
        }
    }

    /// `|det N^G|`.
    pub fn expected_det(self) -> u64 {
        match self {
            Case::M22 => 44,
            Case::L34 => 84,
            Case::A7 => 56,
            Case::A8 => 60,
            Case::M11 => 66,
            Case::A5x3 => 120,
        }
    }

    /// Order of the isotropic subgroup gluing `<h>` to `N_G`.
    pub fn glue_order(self) -> u64 {
        match self {
            Case::M22 => 4,
            Case::L34 => 12,
            Case::A7 => 8,
            Case::A8 => 12,
            Case::M11 => 6,
            Case::A5x3 => 24,
        }
    }

    /// Characteristic of the supersingular K3 surface.
    pub fn expected_p(self) -> u64 {
        match self {
            Case::M22 | Case::M11 => 11,
            Case::L34 | Case::A7 => 7,
            Case::A8 | Case::A5x3 => 5,
        }
    }

    /// `h^2`.
    pub fn expected_h2(self) -> u64 {
        self.expected_det()
    }

    /// The form `q_{N_G}` as a sum of cyclic pieces `(order, a, d)` meaning
    /// `(a/d)` on `Z/order`.
    pub fn claimed_q_ng(self) -> &'static [(u64, i64, i64)] {
        match self {
            Case::M22 => &[(4, 5, 4), (11, 4, 11)],
            Case::L34 => &[(4, 3, 4), (3, 2, 3), (7, 6, 7)],
            Case::A7 => &[(8, 1, 8), (7, 2, 7)],
            Case::A8 => &[(4, 1, 4), (3, 4, 3), (5, 6, 5)],
            Case::M11 => &[(2, 3, 2), (3, 2, 3), (11, 2, 11)],
            Case::A5x3 => &[(8, 9, 8), (3, 2, 3), (5, 8, 5)],
        }
    }

    pub fn claimed_q_ng_form(self) -> Fqf {
        Fqf::diagonal(self.claimed_q_ng()).expect("tabulated forms are valid")
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s) || c.group_name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown case {s:?}")))
    }
}

/// Orbits of a permutation action on the points `1..=24`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub case: Case,
    pub blocks: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    fn mask(&self, i: usize) -> u32 {
        mask_of(&self.blocks[i]).expect("blocks hold valid points")
    }

    /// Block sizes, disjoint cover, fixed first point and the code-theoretic
    /// shape required for the case.
    pub fn validate(&self, code: &GolayCode) -> Result<()> {
        let fail = |m: &str| Err(Error::SelfCheck(format!("{} partition: {m}", self.case)));
        if self.sizes() != self.case.orbit_sizes() {
            return fail("block sizes");
        }
        if self.blocks[0] != [1] {
            return fail("first block must be the fixed point 1");
        }
        let mut seen = 0u32;
        for b in &self.blocks {
            let m = mask_of(b)?;
            if seen & m != 0 {
                return fail("blocks overlap");
            }
            seen |= m;
        }
        if seen.count_ones() as usize != LENGTH {
            return fail("blocks do not cover all points");
        }
        let ok = match self.case {
            Case::A7 => is_weight(code, self.mask(0) | self.mask(1), 8),
            Case::A8 => is_weight(code, self.mask(1), 8),
            Case::M11 => {
                is_weight(code, self.mask(0) | self.mask(1), 12)
                    && is_weight(code, self.mask(2), 12)
            }
            _ => true,
        };
        if !ok {
            return fail("structural codeword condition");
        }
        Ok(())
    }
}

fn is_weight(code: &GolayCode, word: u32, w: u32) -> bool {
    word.count_ones() == w && code.contains(word)
}

fn complement(points: &[usize]) -> Vec<usize> {
    (1..=LENGTH).filter(|p| !points.contains(p)).collect()
}

pub fn make_partition(case: Case, code: &GolayCode) -> Result<OrbitPartition> {
    let blocks = match case {
        Case::M22 => vec![vec![1], vec![2]],
        Case::L34 => vec![vec![1], vec![2, 3]],
        Case::A5x3 => vec![vec![1], vec![2, 3, 4]],
        Case::A7 => {
            let o = points_of(code.find_octad(&[1], &[])?);
            vec![vec![1], o.into_iter().filter(|&p| p != 1).collect()]
        }
        Case::A8 => vec![vec![1], points_of(code.find_octad(&[], &[1])?)],
        Case::M11 => {
            let d = points_of(code.find_dodecad(&[1], &[])?);
            vec![vec![1], d.into_iter().filter(|&p| p != 1).collect()]
        }
    };
    let used: Vec<usize> = blocks.concat();
    let mut blocks = blocks;
    blocks.push(complement(&used));
    let p = OrbitPartition { case, blocks };
    p.validate(code)?;
    Ok(p)
}

/// `N^G = N ∩ span_Q{Σ_{i ∈ B} x_i}` for the orbit partition.
pub fn invariant_sublattice(n: &NiemeierA1, partition: &OrbitPartition) -> Result<Sublattice> {
    let rows = partition
        .blocks
        .iter()
        .map(|b| n.scaled_root_sum(b, 1))
        .collect::<Result<Vec<_>>>()?;
    let gens = IntMatrix::from_big_rows(rows, LENGTH)?;
    Ok(Sublattice::new(n.lattice.clone(), &gens)?.saturation())
}

/// Néron–Severi lattice of a supersingular K3 surface with Artin invariant 1.
#[derive(Clone, Debug)]
pub struct NsTarget {
    pub p: u64,
    pub sigma: u32,
    pub lattice: Lattice,
    pub fqf: Fqf,
}

/// The discriminant form expected for `p`, as written in the literature.
pub fn ns_target_form(p: u64) -> Result<Fqf> {
    match p {
        5 => Fqf::diagonal(&[(5, -2, 5), (5, -6, 5)]),
        7 => Fqf::diagonal(&[(7, -6, 7), (7, -6, 7)]),
        11 => Fqf::diagonal(&[(11, -10, 11), (11, -10, 11)]),
        _ => Err(Error::UnsupportedPrime(p)),
    }
}

/// Generator data of the `p = 5` construction: `x` generates `A_{E7}`,
/// `y` generates `A_{A9}`.
#[derive(Clone, Debug)]
pub struct P5Glue {
    /// `K = U ⊕ E7 ⊕ A4 ⊕ A9`.
    pub k: Lattice,
    pub form: DiscriminantForm,
    pub x: FqfElement,
    pub y: FqfElement,
    /// The isotropic element of order 2, `x + 5y`.
    pub glue: FqfElement,
}

impl P5Glue {
    pub fn new() -> Result<Self> {
        let parts = [
            root_lattice(RootKind::U)?,
            root_lattice(RootKind::E7)?,
            root_lattice(RootKind::A(4))?,
            root_lattice(RootKind::A(9))?,
        ];
        let mut k = Lattice::zero();
        let mut form: Option<DiscriminantForm> = None;
        for part in &parts {
            k = k.direct_sum(part);
            let d = discriminant_form(part)?;
            form = Some(match form {
                None => d,
                Some(f) => f.direct_sum(&d),
            });
        }
        let form = form.expect("four summands");
        // generator order: E7 (Z/2), A4 (Z/5), A9 (Z/10)
        if form.fqf.orders() != [2, 5, 10] {
            return Err(Error::SelfCheck(format!(
                "unexpected discriminant group of K: {}",
                form.fqf
            )));
        }
        let x = form.fqf.element(&[1, 0, 0]);
        let y = form.fqf.element(&[0, 0, 1]);
        let glue = form.fqf.add(&x, &form.fqf.scalar_mul(5, &y));
        Ok(Self {
            k,
            form,
            x,
            y,
            glue,
        })
    }

    pub fn overlattice(&self) -> Result<Lattice> {
        let spec = GlueSpec::new(vec![self.form.lift_of(&self.glue)], 2)?;
        Ok(glue_overlattice(&self.k, &spec)?.lattice)
    }
}

pub fn ns_target(p: u64) -> Result<NsTarget> {
    let lattice = match p {
        7 => [RootKind::U, RootKind::E8, RootKind::A(6), RootKind::A(6)]
            .into_iter()
            .try_fold(Lattice::zero(), |acc, k| {
                Ok::<_, Error>(acc.direct_sum(&root_lattice(k)?))
            })?,
        11 => [RootKind::U, RootKind::A(10), RootKind::A(10)]
            .into_iter()
            .try_fold(Lattice::zero(), |acc, k| {
                Ok::<_, Error>(acc.direct_sum(&root_lattice(k)?))
            })?,
        5 => P5Glue::new()?.overlattice()?,
        _ => return Err(Error::UnsupportedPrime(p)),
    };
    let fqf = discriminant_form(&lattice)?.fqf;
    let target = NsTarget {
        p,
        sigma: 1,
        lattice,
        fqf,
    };
    let p2 = BigInt::from(p * p);
    if target.lattice.rank() != 22
        || target.lattice.signature() != Signature::new(1, 21, 0)
        || target.lattice.det() != -p2
    {
        return Err(Error::SelfCheck(format!(
            "NS lattice for p = {p} has wrong invariants"
        )));
    }
    if !target
        .fqf
        .is_isomorphic_to(&ns_target_form(p)?)
        .is_isomorphic()
    {
        return Err(Error::SelfCheck(format!(
            "NS form for p = {p} does not match"
        )));
    }
    Ok(target)
}

/// Shared inputs for all cases.
#[derive(Clone, Debug)]
pub struct Context {
    pub code: GolayCode,
    pub niemeier: NiemeierA1,
}

impl Context {
    pub fn new() -> Result<Self> {
        let code = build_golay()?;
        let niemeier = build_niemeier(&code)?;
        Ok(Self { code, niemeier })
    }
}

/// Verification record of one case. Field names follow the JSON schema.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub group: String,
    pub blocks: Vec<Vec<usize>>,
    #[serde(rename = "detNG")]
    pub det_ng: Option<i64>,
    #[serde(rename = "qNG")]
    pub q_ng: Option<FqfRecord>,
    #[serde(rename = "qN_G")]
    pub q_n_g: Option<FqfRecord>,
    #[serde(rename = "rootFree")]
    pub root_free: bool,
    #[serde(rename = "minNormNG")]
    pub min_norm_ng: Option<i64>,
    pub h2: u64,
    #[serde(rename = "glueOrder")]
    pub glue_order: u64,
    #[serde(rename = "glueElement")]
    pub glue_element: Option<String>,
    #[serde(rename = "glueCandidates")]
    pub glue_candidates: usize,
    #[serde(rename = "validGlueCount")]
    pub valid_glue_count: usize,
    #[serde(rename = "detS")]
    pub det_s: Option<i64>,
    #[serde(rename = "signatureS")]
    pub signature_s: Option<Signature>,
    #[serde(rename = "qS")]
    pub q_s: Option<FqfRecord>,
    pub target_p: Option<u64>,
    #[serde(rename = "targetMatch")]
    pub target_match: bool,
    #[serde(rename = "lNG")]
    pub l_ng: Option<usize>,
    #[serde(rename = "nikulinOK")]
    pub nikulin_ok: bool,
    pub status: String,
    #[serde(skip)]
    pub failures: Vec<String>,
    #[serde(skip)]
    pub forms: Option<CaseForms>,
}

/// The forms behind a report, kept for programmatic checks.
#[derive(Clone, Debug)]
pub struct CaseForms {
    pub q_ng: Fqf,
    pub q_n_g: Fqf,
    pub q_s: Option<Fqf>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |s: &Option<i64>| s.map_or("-".into(), |v| v.to_string());
        let sizes: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        writeln!(f, "case {} ({}), orbits {:?}", self.case, self.group, sizes)?;
        writeln!(f, "  det N^G        {}", opt(&self.det_ng))?;
        if let Some(forms) = &self.forms {
            writeln!(f, "  q_(N^G)        {}", forms.q_ng)?;
            writeln!(f, "  q_(N_G)        {}", forms.q_n_g)?;
        }
        writeln!(
            f,
            "  N_G root-free  {} (min |norm| {})",
            self.root_free,
            opt(&self.min_norm_ng)
        )?;
        writeln!(
            f,
            "  l(N_G)         {}",
            self.l_ng.map_or("-".into(), |l| l.to_string())
        )?;
        writeln!(f, "  h^2            {}", self.h2)?;
        writeln!(
            f,
            "  glue           order {}, element {}, {} of {} isotropic candidates valid",
            self.glue_order,
            self.glue_element.as_deref().unwrap_or("-"),
            self.valid_glue_count,
            self.glue_candidates
        )?;
        writeln!(
            f,
            "  S              det {}, signature {}",
            opt(&self.det_s),
            self.signature_s.map_or("-".into(), |s| s.to_string())
        )?;
        if let Some(Some(q)) = self.forms.as_ref().map(|fm| fm.q_s.as_ref()) {
            writeln!(f, "  q_S            {q}")?;
        }
        writeln!(
            f,
            "  target p       {} (match {})",
            self.target_p.map_or("-".into(), |p| p.to_string()),
            self.target_match
        )?;
        writeln!(f, "  Nikulin hyp.   {}", self.nikulin_ok)?;
        write!(f, "  status         {}", self.status)
    }
}

/// Outcome of one glue candidate.
struct GlueResult {
    det: BigInt,
    signature: Signature,
    fqf: Fqf,
    lattice: Lattice,
    matches: bool,
}

fn try_glue(
    l: &Lattice,
    form: &DiscriminantForm,
    x: &FqfElement,
    order: u64,
    p: u64,
    target: &Fqf,
) -> Option<GlueResult> {
    let spec = GlueSpec::new(vec![form.lift_of(x)], order).ok()?;
    let s = glue_overlattice(l, &spec).ok()?.lattice;
    let det = s.det();
    if det != -BigInt::from(p * p) {
        return None;
    }
    let signature = s.signature();
    let fqf = discriminant_form(&s).ok()?.fqf;
    let matches =
        signature == Signature::new(1, 21, 0) && fqf.is_isomorphic_to(target).is_isomorphic();
    Some(GlueResult {
        det,
        signature,
        fqf,
        lattice: s,
        matches,
    })
}

fn iso(a: &Fqf, b: &Fqf) -> std::result::Result<(), String> {
    match a.is_isomorphic_to(b) {
        IsoOutcome::Isomorphic(_) => Ok(()),
        IsoOutcome::NotIsomorphic => Err("not isomorphic".into()),
        IsoOutcome::Undecided { explored } => Err(format!("undecided after {explored} nodes")),
    }
}

/// Runs the full pipeline for one case, collecting every failing step.
pub fn run_case_in(ctx: &Context, case: Case) -> CaseReport {
    let mut r = CaseReport {
        case: case.label().into(),
        group: case.group_name().into(),
        blocks: Vec::new(),
        det_ng: None,
        q_ng: None,
        q_n_g: None,
        root_free: false,
        min_norm_ng: None,
        h2: 0,
        glue_order: case.glue_order(),
        glue_element: None,
        glue_candidates: 0,
        valid_glue_count: 0,
        det_s: None,
        signature_s: None,
        q_s: None,
        target_p: None,
        target_match: false,
        l_ng: None,
        nikulin_ok: false,
        status: String::new(),
        failures: Vec::new(),
        forms: None,
    };
    if let Err(e) = run_steps(ctx, case, &mut r) {
        r.failures.push(format!("aborted: {e}"));
    }
    r.status = if r.failures.is_empty() {
        "pass".into()
    } else {
        let steps: Vec<&str> = r
            .failures
            .iter()
            .map(|f| f.split(':').next().unwrap_or(f))
            .collect();
        format!("fail:{}", steps.join(","))
    };
    r
}

fn run_steps(ctx: &Context, case: Case, r: &mut CaseReport) -> Result<()> {
    let partition = make_partition(case, &ctx.code)?;
    r.blocks = partition.blocks.clone();

    let inv = invariant_sublattice(&ctx.niemeier, &partition)?;
    let n_g_sub = inv.orthogonal_complement();
    let ng = inv.lattice();
    let n_g = n_g_sub.lattice();
    let det_ng = ng.det();
    r.det_ng = det_ng.to_i64();
    if inv.rank() != 3 || n_g.rank() != 21 {
        r.failures
            .push("rank: invariant lattice must have rank 3".into());
    }
    if det_ng.abs() != BigInt::from(case.expected_det()) {
        r.failures
            .push(format!("detNG: |{det_ng}| != {}", case.expected_det()));
    }
    if n_g.det().abs() != det_ng.abs() {
        r.failures.push("detNG: |det N_G| != |det N^G|".into());
    }

    let d_ng = discriminant_form(&ng)?;
    let d_n_g = discriminant_form(&n_g)?;
    r.q_ng = Some(d_ng.fqf.to_record());
    r.q_n_g = Some(d_n_g.fqf.to_record());
    if let Err(e) = iso(&d_n_g.fqf, &d_ng.fqf.negate()) {
        r.failures.push(format!("duality: q_(N_G) vs -q_(N^G) {e}"));
    }
    if let Err(e) = iso(&d_n_g.fqf, &case.claimed_q_ng_form()) {
        r.failures.push(format!("qN_G: {e}"));
    }
    r.forms = Some(CaseForms {
        q_ng: d_ng.fqf.clone(),
        q_n_g: d_n_g.fqf.clone(),
        q_s: None,
    });

    let l_ng = l_invariant(&n_g)?;
    r.l_ng = Some(l_ng);

    let roots = vectors_with_norm(&n_g, &BigInt::from(-2))?;
    let m = min_norm(&n_g)?;
    r.min_norm_ng = m.to_i64();
    r.root_free = roots.vectors.is_empty() && m == BigInt::from(4);
    if !r.root_free {
        r.failures.push(format!(
            "rootFree: {} roots, min norm {m}",
            roots.vectors.len()
        ));
    }

    let h2 = det_ng
        .abs()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter("det too large".into()))?;
    r.h2 = h2;
    if h2 != case.expected_h2() {
        r.failures.push(format!(
            "table2: h^2 = {h2}, expected {}",
            case.expected_h2()
        ));
    }
    let order = case.glue_order();
    let h = root_lattice(RootKind::Rank1(h2 as i64))?;
    let l = h.direct_sum(&n_g);
    let form = discriminant_form(&h)?.direct_sum(&d_n_g);

    // p from |det S| = h^2 |det N_G| / order^2 = p^2
    let det_l = BigInt::from(h2) * BigInt::from(h2);
    let o2 = BigInt::from(order * order);
    let p = if (&det_l % &o2).is_zero() {
        let q = &det_l / &o2;
        let s = q.sqrt();
        (&s * &s == q).then(|| s.to_u64()).flatten()
    } else {
        None
    };
    let Some(p) = p else {
        r.failures.push(format!(
            "glue: h^4 / order^2 is not a square for order {order}"
        ));
        return Ok(());
    };
    r.target_p = Some(p);
    if p != case.expected_p() {
        r.failures
            .push(format!("table2: p = {p}, expected {}", case.expected_p()));
    }
    let target = ns_target(p)?;

    let candidates = form.fqf.isotropic_elements(order);
    r.glue_candidates = candidates.len();
    let results: Vec<Option<GlueResult>> = candidates
        .par_iter()
        .map(|x| try_glue(&l, &form, x, order, p, &target.fqf))
        .collect();
    r.valid_glue_count = results.iter().flatten().filter(|g| g.matches).count();
    let chosen = candidates
        .iter()
        .zip(&results)
        .find(|(_, g)| g.as_ref().is_some_and(|g| g.matches));
    let Some((x, Some(g))) = chosen else {
        r.failures
            .push("glue: no isotropic element gives the target lattice".into());
        return Ok(());
    };
    r.glue_element = Some(describe_glue(&form, x, d_n_g.fqf.num_generators()));
    r.det_s = g.det.to_i64();
    r.signature_s = Some(g.signature);
    r.q_s = Some(g.fqf.to_record());
    r.target_match = g.matches;
    if let Some(forms) = r.forms.as_mut() {
        forms.q_s = Some(g.fqf.clone());
    }
    let l_s = g.fqf.min_generators();
    r.nikulin_ok =
        l_s + 2 <= g.lattice.rank() && g.signature.is_indefinite() && g.lattice.is_even();
    if !r.nikulin_ok {
        r.failures.push("nikulin: l(A_S) + 2 > rank S".into());
    }
    Ok(())
}

/// `k·h/h^2 + θ` style description: the `<h>` coefficient followed by the
/// coefficients on the generators of `A_{N_G}`.
fn describe_glue(form: &DiscriminantForm, x: &FqfElement, n_g_gens: usize) -> String {
    let c = x.coefficients();
    let split = c.len() - n_g_gens;
    let h_part = if split == 1 && c[0] != 0 {
        let d = form.fqf.orders()[0];
        let g = c[0].gcd(&d);
        match (c[0] / g, d / g) {
            (1, den) => format!("h/{den}"),
            (num, den) => format!("{num}h/{den}"),
        }
    } else {
        "0".into()
    };
    let theta: Vec<String> = c[split..].iter().map(u64::to_string).collect();
    format!("{h_part} + theta({})", theta.join(","))
}

pub fn run_case(case: Case) -> Result<CaseReport> {
    let ctx = Context::new()?;
    Ok(run_case_in(&ctx, case))
}

/// Worker cap from `FORGE_WORKERS`, if set to a positive integer.
pub fn worker_limit() -> Option<usize> {
    std::env::var("FORGE_WORKERS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// All six cases, in table order.
pub fn table2() -> Result<Vec<CaseReport>> {
    let ctx = Context::new()?;
    let run = || {
        Case::ALL
            .par_iter()
            .map(|&c| run_case_in(&ctx, c))
            .collect::<Vec<_>>()
    };
    match worker_limit() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))
            .map(|pool| pool.install(run)),
        None => Ok(run()),
    }
}

/// One row of the summary table: `(case, p, h^2)`.
pub fn table2_rows(reports: &[CaseReport]) -> Vec<(String, Option<u64>, u64)> {
    reports
        .iter()
        .map(|r| (r.case.clone(), r.target_p, r.h2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new().unwrap()
    }

    #[test]
    fn case_labels_round_trip() {
        for c in Case::ALL {
            assert_eq!(c.label().parse::<Case>().unwrap(), c);
            assert_eq!(c.group_name().parse::<Case>().unwrap(), c);
            assert_eq!(c.orbit_sizes().iter().sum::<usize>(), 24);
        }
        assert!("M24".parse::<Case>().is_err());
    }

    #[test]
    fn partitions_have_table_shapes() {
        let ctx = ctx();
        for c in Case::ALL {
            let p = make_partition(c, &ctx.code).unwrap();
            assert_eq!(p.sizes(), c.orbit_sizes());
        }
        let m11 = make_partition(Case::M11, &ctx.code).unwrap();
        let w = mask_of(&m11.blocks[0]).unwrap() | mask_of(&m11.blocks[1]).unwrap();
        assert!(ctx.code.contains(w));
    }

    #[test]
    fn bad_partition_rejected() {
        let ctx = ctx();
        let mut p = make_partition(Case::A8, &ctx.code).unwrap();
        // move a point out of the octad
        let moved = p.blocks[1].pop().unwrap();
        p.blocks[2].push(moved);
        assert!(p.validate(&ctx.code).is_err());
    }

    #[test]
    fn m22_invariant_lattice_index_two_over_block_sums() {
        let ctx = ctx();
        let part = make_partition(Case::M22, &ctx.code).unwrap();
        let rows: Vec<Vec<BigInt>> = part
            .blocks
            .iter()
            .map(|b| ctx.niemeier.scaled_root_sum(b, 1).unwrap())
            .collect();
        let spans = Sublattice::new(
            ctx.niemeier.lattice.clone(),
            &IntMatrix::from_big_rows(rows, LENGTH).unwrap(),
        )
        .unwrap();
        assert_eq!(spans.index_in_saturation(), BigInt::from(2));
        // block sums have norms -2, -2, -44: det -176, divided by 2^2
        assert_eq!(spans.lattice().det(), BigInt::from(-176));
        let inv = invariant_sublattice(&ctx.niemeier, &part).unwrap();
        assert_eq!(inv.lattice().det(), BigInt::from(-44));
        let all = ctx
            .niemeier
            .scaled_root_sum(&(1..=24).collect::<Vec<_>>(), 2)
            .unwrap();
        assert!(inv.contains(&all));
    }

    #[test]
    fn a8_invariant_contains_half_octad() {
        let ctx = ctx();
        let part = make_partition(Case::A8, &ctx.code).unwrap();
        let inv = invariant_sublattice(&ctx.niemeier, &part).unwrap();
        let half = ctx.niemeier.scaled_root_sum(&part.blocks[1], 2).unwrap();
        assert!(inv.contains(&half));
        assert_eq!(inv.lattice().det().abs(), BigInt::from(60));
    }

    #[test]
    fn targets_have_expected_invariants() {
        for p in [5, 7, 11] {
            let t = ns_target(p).unwrap();
            assert_eq!(t.lattice.det(), -BigInt::from(p * p));
            assert_eq!(t.fqf.group_order(), p * p);
        }
        assert!(matches!(ns_target(3), Err(Error::UnsupportedPrime(3))));
    }

    #[test]
    fn p5_generator_values() {
        let g = P5Glue::new().unwrap();
        let f = &g.form.fqf;
        let half = num_rational::Rational64::new(1, 2);
        assert_eq!(f.eval_q(&g.x), half);
        // q(5y) = -1/2 ≡ 3/2
        assert_eq!(
            f.eval_q(&f.scalar_mul(5, &g.y)),
            num_rational::Rational64::new(3, 2)
        );
        assert_eq!(f.eval_q(&g.glue), num_rational::Rational64::zero());
        // x + y itself is not isotropic
        assert_ne!(
            f.eval_q(&f.add(&g.x, &g.y)),
            num_rational::Rational64::zero()
        );
        assert_eq!(g.overlattice().unwrap().det(), BigInt::from(-25));
    }
}
