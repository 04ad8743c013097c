//! Reflection arrangements of explicit quaternionic matrix groups.
//!
//! A linear form `a` is a row vector acting by `a · x = Σ a_i x_i` on column
//! vectors of the right vector space `H^n`; its kernel is unchanged by left
//! multiplication with a nonzero scalar, so forms are normalized to have
//! first nonzero coefficient 1. A matrix `g` maps `ker a` to `ker(a g⁻¹)`.
//!
//! Group data is read from JSON:
//!
//! ```json
//! {
//!   "name": "W(S1)",
//!   "generators": [ [[q11, q12], [q21, q22]], ... ],
//!   "order": 1152,
//!   "hyperplanes": 24,
//!   "poincare": [1, 1, 0, 1, 1],
//!   "forms": [[q1, q2], ...]
//! }
//! ```
//!
//! Each quaternion `q` is `[w, x, y, z]`; each coordinate is either a
//! rational string such as `"-1/2"` or four rational strings
//! `[a, b, c, d]` for `a + b√2 + c√5 + d√10`. Only `name` and `generators`
//! are required.

use std::collections::{HashMap, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::equivariant::{group_order, invariant_dimension_of, ImprimitiveGroup, Instance, Limits};
use crate::error::{Error, Result};
use crate::exact_quaternions::Quat;
use crate::finite_groups::{FiniteGroup, KHPair};
use crate::gain_arrangement::HyperplaneLabel;
use crate::matroid::{CachedOracle, RankOracle};
use crate::os_algebra::OsAlgebra;
use crate::parabolic_orbits::closed_form_poincare;

pub type Form = Vec<Quat>;

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// Reference invariant Poincaré polynomials of the primitive groups in rank
/// at least 3, in the compressed variable.
pub const PRIMITIVE_REFERENCE: &[(&str, usize, &[usize])] = &[
    ("W(Q)", 3, &[1, 1]),
    ("W(R)", 3, &[1, 1]),
    ("W(S1)", 4, &[1, 1, 0, 1, 1]),
    ("W(S2)", 4, &[1, 1, 0, 1, 1]),
    ("W(S3)", 4, &[1, 1, 0, 1, 1]),
    ("W(T)", 4, &[1, 1, 0, 1, 1]),
    ("W(U)", 5, &[1, 1, 0, 0, 1, 1]),
];

pub fn reference_poincare(name: &str) -> Option<&'static [usize]> {
    let key: String = name.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
    PRIMITIVE_REFERENCE.iter().find(|(n, _, _)| *n == key).map(|(_, _, p)| *p)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Quat>>", into = "Vec<Vec<Quat>>")]
pub struct QuatMatrix {
    rows: Vec<Vec<Quat>>,
}

impl TryFrom<Vec<Vec<Quat>>> for QuatMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<Quat>>) -> Result<Self> {
        QuatMatrix::new(rows)
    }
}

impl From<QuatMatrix> for Vec<Vec<Quat>> {
    fn from(m: QuatMatrix) -> Self {
        m.rows
    }
}

impl QuatMatrix {
    pub fn new(rows: Vec<Vec<Quat>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be square and non-empty".into()));
        }
        Ok(QuatMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Quat::one() } else { Quat::zero() }).collect())
            .collect();
        QuatMatrix { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Quat>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Quat {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &QuatMatrix) -> QuatMatrix {
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = Quat::zero();
                        for l in 0..n {
                            let a = &self.rows[i][l];
                            let b = &other.rows[l][j];
                            if !a.is_zero() && !b.is_zero() {
                                acc = &acc + &(a * b);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        QuatMatrix { rows }
    }

    pub fn is_identity(&self) -> bool {
        *self == QuatMatrix::identity(self.n())
    }

    /// `1 - g`.
    pub fn one_minus(&self) -> QuatMatrix {
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let neg = -&self.rows[i][j];
                        if i == j {
                            &Quat::one() + &neg
                        } else {
                            neg
                        }
                    })
                    .collect()
            })
            .collect();
        QuatMatrix { rows }
    }

    /// Inverse of a matrix of finite order, as its last non-trivial power.
    pub fn finite_order_inverse(&self, cap: usize) -> Result<QuatMatrix> {
        let mut prev = QuatMatrix::identity(self.n());
        let mut cur = self.clone();
        for _ in 0..cap {
            if cur.is_identity() {
                return Ok(prev);
            }
            prev = cur.clone();
            cur = cur.mul(self);
        }
        Err(Error::CapExceeded(cap))
    }

    /// Matrix of `(d, σ)`: entry `(σ(i), i)` is `d_{σ(i)}`.
    pub fn from_imprimitive(group: &ImprimitiveGroup, g: &crate::equivariant::GroupNElement) -> Result<Self> {
        let real = realization(group.k())?;
        let n = group.n();
        let mut m = vec![vec![Quat::zero(); n]; n];
        for (i, &t) in g.perm.iter().enumerate() {
            let t = t as usize;
            m[t][i] = real[g.gains[t] as usize].clone();
        }
        QuatMatrix::new(m)
    }
}

fn realization(k: &FiniteGroup) -> Result<&[Quat]> {
    k.realization().ok_or_else(|| {
        Error::Precondition(format!("{} has no exact quaternion realization", k.spec()))
    })
}

/// Row rank over the quaternions by elimination with left row operations.
pub fn skew_rank(rows: &[Form]) -> usize {
    let mut m: Vec<Form> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].inv().expect("pivot is nonzero");
        let pivot: Form = m[rank].iter().map(|x| &inv * x).collect();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                row[j] = &row[j] - &(&f * &pivot[j]);
            }
        }
        m[rank] = pivot;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Left multiple of the form with first nonzero coefficient 1.
pub fn normalize_form(f: &[Quat]) -> Option<Form> {
    let lead = f.iter().find(|q| !q.is_zero())?;
    let inv = lead.inv().ok()?;
    Some(f.iter().map(|q| &inv * q).collect())
}

/// The row vector `a · m`.
pub fn form_times(a: &[Quat], m: &QuatMatrix) -> Form {
    let n = m.n();
    (0..n)
        .map(|j| {
            let mut acc = Quat::zero();
            for (i, ai) in a.iter().enumerate() {
                if !ai.is_zero() && !m.get(i, j).is_zero() {
                    acc = &acc + &(ai * m.get(i, j));
                }
            }
            acc
        })
        .collect()
}

/// The form `x_i` or `x_i - ζ x_j` of a gain-graph label.
pub fn label_form(k: &FiniteGroup, n: usize, label: HyperplaneLabel) -> Result<Form> {
    let real = realization(k)?;
    let mut f = vec![Quat::zero(); n];
    match label {
        HyperplaneLabel::Coord(i) => f[i] = Quat::one(),
        HyperplaneLabel::Edge { i, j, gain } => {
            f[i] = Quat::one();
            f[j] = -&real[gain as usize];
        }
    }
    Ok(f)
}

/// Rank oracle of a list of linear forms.
pub struct FormMatroid {
    forms: Vec<Form>,
}

impl FormMatroid {
    pub fn new(forms: Vec<Form>) -> Self {
        FormMatroid { forms }
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }
}

impl RankOracle for FormMatroid {
    fn len(&self) -> usize {
        self.forms.len()
    }

    fn rank(&self, set: &[usize]) -> usize {
        let rows: Vec<Form> = set.iter().map(|&i| self.forms[i].clone()).collect();
        skew_rank(&rows)
    }
}

/// A finite matrix group in breadth-first order from the identity, with
/// `elements[i] = elements[p] · generators[s]` recorded as `parent[i] = (p, s)`.
pub struct MatrixGroup {
    pub generators: Vec<QuatMatrix>,
    pub elements: Vec<QuatMatrix>,
    pub parent: Vec<Option<(usize, usize)>>,
}

impl MatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

pub fn generate_group(gens: &[QuatMatrix], cap: usize) -> Result<MatrixGroup> {
    let n = gens.first().map_or(1, QuatMatrix::n);
    if gens.iter().any(|g| g.n() != n) {
        return Err(Error::InvalidInput("generators of different sizes".into()));
    }
    let id = QuatMatrix::identity(n);
    let mut index: HashMap<QuatMatrix, usize> = HashMap::new();
    index.insert(id.clone(), 0);
    let mut elements = vec![id];
    let mut parent = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (s, g) in gens.iter().enumerate() {
            let y = elements[x].mul(g);
            if index.contains_key(&y) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::CapExceeded(cap));
            }
            index.insert(y.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(y);
            parent.push(Some((x, s)));
        }
    }
    Ok(MatrixGroup { generators: gens.to_vec(), elements, parent })
}

/// Reflections of a matrix group and the arrangement of their fixed
/// hyperplanes, with the induced permutation of every element.
pub struct MatrixArrangement {
    pub forms: Vec<Form>,
    /// Element index of each reflection with the index of its hyperplane.
    pub reflections: Vec<(usize, usize)>,
    pub oracle: Arc<CachedOracle<FormMatroid>>,
    /// `perms[g][a]`: index of the normalized `a g⁻¹`.
    pub perms: Vec<Vec<u16>>,
}

impl MatrixArrangement {
    pub fn num_hyperplanes(&self) -> usize {
        self.forms.len()
    }

    pub fn position(&self, form: &[Quat]) -> Option<usize> {
        let f = normalize_form(form)?;
        self.forms.iter().position(|x| *x == f)
    }
}

pub fn reflections_and_arrangement(group: &MatrixGroup, max_hyperplanes: usize) -> Result<MatrixArrangement> {
    let mut forms: Vec<Form> = Vec::new();
    let mut index: HashMap<Form, usize> = HashMap::new();
    let mut reflections = Vec::new();
    for (e, g) in group.elements.iter().enumerate() {
        let d = g.one_minus();
        if skew_rank(d.rows()) != 1 {
            continue;
        }
        let row = d.rows().iter().find(|r| r.iter().any(|q| !q.is_zero())).expect("rank one");
        let f = normalize_form(row).expect("nonzero row");
        let next = forms.len();
        let h = *index.entry(f.clone()).or_insert(next);
        if h == next {
            forms.push(f);
            if forms.len() > max_hyperplanes {
                return Err(Error::SizeGuard {
                    what: "hyperplanes".into(),
                    size: forms.len() as u128,
                    limit: max_hyperplanes as u128,
                });
            }
        }
        reflections.push((e, h));
    }
    let gen_perms = group
        .generators
        .iter()
        .map(|s| {
            let inv = s.finite_order_inverse(DEFAULT_GROUP_CAP)?;
            forms
                .iter()
                .map(|a| {
                    let b = normalize_form(&form_times(a, &inv)).expect("g is invertible");
                    index.get(&b).map(|&i| i as u16).ok_or_else(|| {
                        Error::Unclassified("the hyperplane set is not stable under the group".into())
                    })
                })
                .collect::<Result<Vec<u16>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let m = forms.len();
    let mut perms: Vec<Vec<u16>> = Vec::with_capacity(group.order());
    for p in &group.parent {
        perms.push(match *p {
            None => (0..m as u16).collect(),
            Some((y, s)) => gen_perms[s].iter().map(|&a| perms[y][a as usize]).collect(),
        });
    }
    let oracle = Arc::new(CachedOracle::new(FormMatroid::new(forms.clone())));
    Ok(MatrixArrangement { forms, reflections, oracle, perms })
}

/// Distinct permutations, sorted.
fn distinct(perms: &[Vec<u16>]) -> Vec<Vec<u16>> {
    let mut v = perms.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Total and invariant dimensions of the OS algebra per degree.
pub fn cohomology_dims(arr: &MatrixArrangement) -> Result<(Vec<usize>, Vec<usize>)> {
    let alg = OsAlgebra::new(arr.oracle.clone())?;
    let perms = distinct(&arr.perms);
    let inv = (0..=alg.rank())
        .map(|k| invariant_dimension_of(&alg, &perms, k))
        .collect::<Result<Vec<_>>>()?;
    Ok((alg.dims(), inv))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReflectionGroupData {
    pub name: String,
    pub generators: Vec<QuatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperplanes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poincare: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<Vec<Form>>,
}

impl ReflectionGroupData {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }
}

/// All `*.json` files of a directory in name order.
pub fn load_dir(dir: &Path) -> Result<Vec<(PathBuf, ReflectionGroupData)>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let d = ReflectionGroupData::load(&p)?;
            Ok((p, d))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimitiveReport {
    pub name: String,
    pub order: usize,
    pub reflections: usize,
    pub hyperplanes: usize,
    pub rank: usize,
    pub total_dims: Vec<usize>,
    pub invariant_dims: Vec<usize>,
    pub expected_poincare: Option<Vec<usize>>,
    pub order_ok: Option<bool>,
    pub hyperplanes_ok: Option<bool>,
    pub forms_found: Option<bool>,
    pub poincare_ok: Option<bool>,
}

impl PrimitiveReport {
    pub fn passed(&self) -> bool {
        [self.order_ok, self.hyperplanes_ok, self.forms_found, self.poincare_ok]
            .iter()
            .all(|x| x.unwrap_or(true))
    }
}

fn trim(v: &[usize]) -> &[usize] {
    let end = v.iter().rposition(|&c| c != 0).map_or(0, |p| p + 1);
    &v[..end]
}

/// Runs the matrix pipeline on supplied data and compares with whatever
/// expectations it carries, falling back to the reference table by name.
pub fn run_pipeline(data: &ReflectionGroupData, cap: usize, limits: Limits) -> Result<PrimitiveReport> {
    let cap = cap.min(usize::try_from(limits.max_group_order).unwrap_or(usize::MAX));
    let group = generate_group(&data.generators, cap)?;
    let arr = reflections_and_arrangement(&group, limits.max_hyperplanes)?;
    let (total, inv) = cohomology_dims(&arr)?;
    let expected = data.poincare.clone().or_else(|| reference_poincare(&data.name).map(<[usize]>::to_vec));
    let forms_found = data
        .forms
        .as_ref()
        .map(|fs| fs.iter().all(|f| arr.position(f).is_some()));
    Ok(PrimitiveReport {
        name: data.name.clone(),
        order: group.order(),
        reflections: arr.reflections.len(),
        hyperplanes: arr.num_hyperplanes(),
        rank: total.len() - 1,
        poincare_ok: expected.as_ref().map(|e| trim(e) == trim(&inv)),
        expected_poincare: expected,
        total_dims: total,
        invariant_dims: inv,
        order_ok: data.order.map(|o| o == group.order()),
        hyperplanes_ok: data.hyperplanes.map(|h| h == arr.num_hyperplanes()),
        forms_found,
    })
}

/// Matrix generators of `G_n(K,H)` for realized `K`, with its order,
/// hyperplane count and closed-form Poincaré polynomial.
pub fn imprimitive_data(pair: Arc<KHPair>, n: usize) -> Result<ReflectionGroupData> {
    let group = ImprimitiveGroup::new(pair.clone(), n)?;
    let generators = group
        .generators()
        .iter()
        .map(|g| QuatMatrix::from_imprimitive(&group, g))
        .collect::<Result<Vec<_>>>()?;
    let coords = if pair.h_is_trivial() { 0 } else { n };
    Ok(ReflectionGroupData {
        name: format!("G_{n}({},{})", pair.k().spec(), pair.token()),
        generators,
        order: Some(group_order(&pair, n) as usize),
        hyperplanes: Some(coords + pair.k().order() * n * (n - 1) / 2),
        poincare: closed_form_poincare(&pair, n).ok().map(|p| p.coeffs),
        forms: None,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FullStackReport {
    pub instance: String,
    pub order: (usize, u128),
    pub hyperplanes_match: bool,
    pub action_match: bool,
    pub ranks_match: bool,
    pub os_dims: (Vec<usize>, Vec<usize>),
    pub hyperplane_orbits: (usize, usize),
    pub invariant_dims: (Vec<usize>, Vec<usize>),
}

impl FullStackReport {
    pub fn passed(&self) -> bool {
        self.order.0 as u128 == self.order.1
            && self.hyperplanes_match
            && self.action_match
            && self.ranks_match
            && self.os_dims.0 == self.os_dims.1
            && self.hyperplane_orbits.0 == self.hyperplane_orbits.1
            && self.invariant_dims.0 == self.invariant_dims.1
    }
}

fn orbit_count(perms: &[Vec<u16>], m: usize) -> usize {
    let mut seen = vec![false; m];
    let mut count = 0;
    for h in 0..m {
        if !seen[h] {
            count += 1;
            for p in perms {
                seen[p[h] as usize] = true;
            }
        }
    }
    count
}

/// Runs the matrix pipeline on `G_n(K,H)` realized by quaternion matrices
/// and compares every stage with the gain-graph pipeline.
pub fn full_stack_check(pair: Arc<KHPair>, n: usize, limits: Limits) -> Result<FullStackReport> {
    let inst = Instance::new(pair.clone(), n, limits)?;
    let data = imprimitive_data(pair.clone(), n)?;
    let group = generate_group(&data.generators, DEFAULT_GROUP_CAP)?;
    let marr = reflections_and_arrangement(&group, limits.max_hyperplanes)?;
    let garr = inst.arrangement();
    let k = pair.k();
    let to_matrix: Vec<Option<usize>> = garr
        .labels()
        .iter()
        .map(|&l| Ok(marr.position(&label_form(k, n, l)?)))
        .collect::<Result<_>>()?;
    let hyperplanes_match =
        marr.num_hyperplanes() == garr.num_hyperplanes() && to_matrix.iter().all(Option::is_some);
    let mut action_match = hyperplanes_match;
    let mut ranks_match = hyperplanes_match;
    if hyperplanes_match {
        let map: Vec<usize> = to_matrix.iter().map(|x| x.unwrap()).collect();
        let ig = inst.group();
        for g in ig.generators() {
            let mat = QuatMatrix::from_imprimitive(ig, &g)?;
            let inv = mat.finite_order_inverse(DEFAULT_GROUP_CAP)?;
            for (h, &l) in garr.labels().iter().enumerate() {
                let image = garr.index_of(ig.act_on_hyperplane(&g, l))?;
                let moved = marr.position(&form_times(&marr.forms[map[h]], &inv));
                action_match &= moved == Some(map[image]);
            }
        }
        let m = garr.num_hyperplanes();
        let mut subset = Vec::new();
        ranks_match = subsets_agree(&mut subset, 0, m, n.min(4), &|s: &[usize]| {
            let mapped: Vec<usize> = s.iter().map(|&i| map[i]).collect();
            garr.rank_of(s) == marr.oracle.rank(&mapped)
        });
    }
    let (mdims, minv) = cohomology_dims(&marr)?;
    Ok(FullStackReport {
        instance: data.name,
        order: (group.order(), inst.group().order()),
        hyperplanes_match,
        action_match,
        ranks_match,
        os_dims: (mdims, inst.algebra().dims()),
        hyperplane_orbits: (
            orbit_count(&distinct(&marr.perms), marr.num_hyperplanes()),
            orbit_count(inst.image_perms(), garr.num_hyperplanes()),
        ),
        invariant_dims: (minv, inst.poincare_direct()?),
    })
}

fn subsets_agree(cur: &mut Vec<usize>, start: usize, m: usize, max: usize, f: &dyn Fn(&[usize]) -> bool) -> bool {
    if !f(cur) {
        return false;
    }
    if cur.len() == max {
        return true;
    }
    for i in start..m {
        cur.push(i);
        let ok = subsets_agree(cur, i + 1, m, max, f);
        cur.pop();
        if !ok {
            return false;
        }
    }
    true
}
