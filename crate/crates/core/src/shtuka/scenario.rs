use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::charstack::{fixed_groupoid_pairs, CharGroupoid, FixedGroupoid};
use crate::error::{Error, Result};
use crate::exactfield::{lcm, make_context, parse_cyc, required_conductor, Ctx, FieldMatrix};
use crate::groups::{
    validate_phi_on, EnumerateOptions, Endomorphism, FinGroup, Permutation, PhiCheck, Presentation, Word,
    DEFAULT_MAX_GROUP_ORDER, DEFAULT_MAX_SEARCH_NODES,
};
use crate::reptheory::{RepKind, Representation};
use crate::tracecalc::{groupoid_algebra, FinDimAlgebra};

const BUILTINS: &[(&str, &str)] = &[
    ("z3-frobenius", include_str!("../../scenarios/z3-frobenius.json")),
    ("s3-inertia", include_str!("../../scenarios/s3-inertia.json")),
    ("f2-swap", include_str!("../../scenarios/f2-swap.json")),
    ("z4-circle", include_str!("../../scenarios/z4-circle.json")),
    ("s3-bundle", include_str!("../../scenarios/s3-bundle.json")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// A matrix entry: an integer or a cyclotomic literal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Literal(String),
}

impl Entry {
    fn text(&self) -> String {
        match self {
            Entry::Int(i) => i.to_string(),
            Entry::Literal(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub name: String,
    /// `trivial`, `permutation`, `regular`, `abelian_character` or `matrices`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    /// One matrix per group generator, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<Entry>>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    /// `regular` or `bundle`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Vec<Vec<Entry>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksSpec {
    #[serde(default)]
    pub span_reps: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_length: Option<usize>,
}

/// The on-disk scenario document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub group: GroupSpec,
    pub presentation: PresentationSpec,
    #[serde(default)]
    pub phi: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u32>,
    pub reps: Vec<RepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default)]
    pub checks: ChecksSpec,
}

impl ScenarioFile {
    /// Strict parse; errors carry the key path of the offending value.
    pub fn parse(src: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(src);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::scenario(path, e.into_inner().to_string())
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub max_group_order: usize,
    pub max_search_nodes: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_group_order: DEFAULT_MAX_GROUP_ORDER, max_search_nodes: DEFAULT_MAX_SEARCH_NODES }
    }
}

/// How the module category and its Frobenius endofunctor are modelled.
#[derive(Clone, Debug)]
pub enum ModuleModel {
    /// Modules over the character-groupoid algebra with the Frobenius pushforward.
    Regular,
    /// The Frobenius pushforward followed by tensoring with the bundle of `rep`,
    /// whose Frobenius structure is the constant intertwiner `structure`.
    Bundle { name: String, rep: Representation, structure: FieldMatrix },
}

impl ModuleModel {
    pub fn bundle(name: &str, rep: Representation, structure: FieldMatrix) -> Result<Self> {
        if structure.rows() != rep.dim() || structure.cols() != rep.dim() {
            return Err(Error::DimensionMismatch("Frobenius structure has the wrong size".into()));
        }
        // the fibers are constant, so compatibility at every object reduces to M c(h) = c(h) M
        for (h, m) in rep.matrices().iter().enumerate() {
            if structure.mat_mul(m)? != m.mat_mul(&structure)? {
                return Err(Error::CheckFailed(format!("Frobenius structure does not commute with transport {h}")));
            }
        }
        Ok(ModuleModel::Bundle { name: name.to_string(), rep, structure })
    }

    /// The fiber slot contributed by the model itself.
    pub fn slot(&self) -> Option<&Representation> {
        match self {
            ModuleModel::Regular => None,
            ModuleModel::Bundle { rep, .. } => Some(rep),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModuleModel::Regular => "regular".into(),
            ModuleModel::Bundle { name, .. } => format!("bundle({name})"),
        }
    }
}

/// A validated scenario with its character groupoid, fixed locus and Frobenius map.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub presentation: Presentation,
    pub phi: Endomorphism,
    pub group: Arc<FinGroup>,
    pub ctx: Ctx,
    pub reps: Vec<(String, Representation)>,
    pub model: ModuleModel,
    pub span_reps: Vec<String>,
    pub loop_length: Option<usize>,
    char_groupoid: Arc<CharGroupoid>,
    fixed: Arc<FixedGroupoid>,
    frobenius: Vec<usize>,
    algebra: OnceLock<Arc<FinDimAlgebra>>,
}

fn parse_matrix(ctx: &Ctx, rows: &[Vec<Entry>], dim: usize, path: &str) -> Result<FieldMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::scenario(path, format!("expected a {dim} x {dim} matrix")));
    }
    let mut m = FieldMatrix::zeros(ctx, dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let v = parse_cyc(ctx, &e.text()).map_err(|err| Error::scenario(format!("{path}[{i}][{j}]"), err.to_string()))?;
            m.set(i, j, v);
        }
    }
    Ok(m)
}

fn entries(file: &ScenarioFile) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (ri, r) in file.reps.iter().enumerate() {
        for (mi, m) in r.matrices.iter().flatten().enumerate() {
            for (i, row) in m.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    out.push((format!("reps[{ri}].matrices[{mi}][{i}][{j}]"), e.text()));
                }
            }
        }
    }
    if let Some(ms) = &file.module {
        for (i, row) in ms.structure.iter().flatten().enumerate() {
            for (j, e) in row.iter().enumerate() {
                out.push((format!("module.structure[{i}][{j}]"), e.text()));
            }
        }
    }
    out
}

fn choose_conductor(file: &ScenarioFile, order: usize) -> Result<u32> {
    let mut needs: Vec<(String, u32)> =
        entries(file).into_iter().map(|(path, text)| (path, required_conductor(&text))).collect();
    for (ri, r) in file.reps.iter().enumerate() {
        if r.kind == "abelian_character" {
            needs.push((format!("reps[{ri}]"), order as u32));
        }
    }
    match file.conductor {
        None => Ok(needs.iter().fold(1, |acc, (_, n)| lcm(acc, *n))),
        Some(0) => Err(Error::scenario("conductor", "conductor must be positive")),
        Some(c) => match needs.iter().find(|(_, n)| c % n != 0) {
            Some((path, n)) => Err(Error::scenario("conductor", format!("{c} cannot represent {path}, which needs zeta({n})"))),
            None => Ok(c),
        },
    }
}

fn build_rep(group: &Arc<FinGroup>, ctx: &Ctx, spec: &RepSpec, path: &str) -> Result<Representation> {
    let wrap = |e: Error| Error::scenario(path, e.to_string());
    let simple = |kind| Representation::builtin(group, ctx, kind).map_err(wrap);
    let no_extra = |ok_k: bool| -> Result<()> {
        if spec.k.is_some() && !ok_k {
            return Err(Error::scenario(format!("{path}.k"), format!("not used by kind {:?}", spec.kind)));
        }
        if spec.matrices.is_some() && spec.kind != "matrices" {
            return Err(Error::scenario(format!("{path}.matrices"), format!("not used by kind {:?}", spec.kind)));
        }
        Ok(())
    };
    match spec.kind.as_str() {
        "trivial" => no_extra(false).and_then(|_| simple(RepKind::Trivial)),
        "permutation" => no_extra(false).and_then(|_| simple(RepKind::Permutation)),
        "regular" => no_extra(false).and_then(|_| simple(RepKind::Regular)),
        "abelian_character" => {
            no_extra(true)?;
            let k = spec.k.ok_or_else(|| Error::scenario(format!("{path}.k"), "missing character index"))?;
            simple(RepKind::AbelianCharacter(k))
        }
        "matrices" => {
            no_extra(false)?;
            let mats = spec
                .matrices
                .as_ref()
                .ok_or_else(|| Error::scenario(format!("{path}.matrices"), "missing generator matrices"))?;
            if mats.len() != group.generators().len() {
                return Err(Error::scenario(
                    format!("{path}.matrices"),
                    format!("{} matrices for {} group generators", mats.len(), group.generators().len()),
                ));
            }
            let dim = mats.first().map_or(0, Vec::len);
            let parsed = mats
                .iter()
                .enumerate()
                .map(|(i, m)| parse_matrix(ctx, m, dim, &format!("{path}.matrices[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Representation::from_generator_matrices(group, ctx, dim, &parsed).map_err(wrap)
        }
        other => Err(Error::scenario(format!("{path}.kind"), format!("unknown representation kind {other:?}"))),
    }
}

impl Scenario {
    pub fn builtin(name: &str) -> Result<Self> {
        Self::builtin_with(name, BuildOptions::default())
    }

    pub fn builtin_with(name: &str, opts: BuildOptions) -> Result<Self> {
        let src = builtin_source(name)
            .ok_or_else(|| Error::scenario("name", format!("no built-in scenario {name:?}")))?;
        build_scenario(&ScenarioFile::parse(src)?, opts)
    }

    pub fn char_groupoid(&self) -> &Arc<CharGroupoid> {
        &self.char_groupoid
    }

    pub fn fixed(&self) -> &Arc<FixedGroupoid> {
        &self.fixed
    }

    /// `ρ ↦ ρ ∘ φ` on the objects of the character groupoid.
    pub fn frobenius_map(&self) -> &[usize] {
        &self.frobenius
    }

    /// The character-groupoid algebra, built on first use.
    pub fn algebra(&self) -> &Arc<FinDimAlgebra> {
        self.algebra
            .get_or_init(|| Arc::new(groupoid_algebra(self.char_groupoid.as_ref(), &self.ctx)))
    }

    /// `|Hom(Γ, G)| · |G|`.
    pub fn algebra_dim(&self) -> usize {
        self.char_groupoid.homs().len() * self.group.order()
    }

    pub fn rep(&self, name: &str) -> Result<&Representation> {
        self.reps
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r)
            .ok_or_else(|| Error::scenario("reps", format!("no representation named {name:?}")))
    }

    pub fn rep_names(&self) -> Vec<&str> {
        self.reps.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// The loop `t` of the mapping torus.
    pub fn frobenius_loop(&self) -> Word {
        Word::generator(self.presentation.rank())
    }

    /// `Γ` trivial and `φ = id`: the fixed locus is the inertia groupoid `G//G`.
    pub fn is_circle(&self) -> bool {
        self.presentation.rank() == 0
    }

    pub fn with_model(&self, model: ModuleModel) -> Self {
        Scenario { model, ..self.clone() }
    }
}

/// Validate everything eagerly: permutations, presentation, `φ`, representations,
/// conductor and the module model.
pub fn build_scenario(file: &ScenarioFile, opts: BuildOptions) -> Result<Scenario> {
    let perms = file
        .group
        .generators
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Permutation::parse_cycles(file.group.degree, s)
                .map_err(|e| Error::scenario(format!("group.generators[{i}]"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let group = Arc::new(
        FinGroup::from_permutations_capped(file.group.degree, &perms, opts.max_group_order)
            .map_err(|e| Error::scenario("group", e.to_string()))?,
    );
    let names = file.presentation.generators.clone();
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || names[..i].contains(n) {
            return Err(Error::scenario(format!("presentation.generators[{i}]"), format!("bad or repeated name {n:?}")));
        }
    }
    let relators = file
        .presentation
        .relators
        .iter()
        .enumerate()
        .map(|(i, r)| Word::parse(r, &names).map_err(|e| Error::scenario(format!("presentation.relators[{i}]"), e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let presentation = Presentation::new(names.clone(), relators).map_err(|e| Error::scenario("presentation", e.to_string()))?;
    let mut phi = Endomorphism::identity(&presentation);
    for (key, w) in &file.phi {
        let i = names
            .iter()
            .position(|n| n == key)
            .ok_or_else(|| Error::scenario(format!("phi.{key}"), format!("unknown generator {key:?}")))?;
        phi.images[i] = Word::parse(w, &names).map_err(|e| Error::scenario(format!("phi.{key}"), e.to_string()))?;
    }
    let conductor = choose_conductor(file, group.order())?;
    let ctx = make_context(conductor).map_err(|e| Error::scenario("conductor", e.to_string()))?;
    let mut reps = Vec::new();
    for (i, spec) in file.reps.iter().enumerate() {
        let path = format!("reps[{i}]");
        if reps.iter().any(|(n, _): &(String, Representation)| *n == spec.name) {
            return Err(Error::scenario(format!("{path}.name"), format!("repeated name {:?}", spec.name)));
        }
        reps.push((spec.name.clone(), build_rep(&group, &ctx, spec, &path)?));
    }
    let find_rep = |name: &str, path: &str| {
        reps.iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r.clone())
            .ok_or_else(|| Error::scenario(path, format!("no representation named {name:?}")))
    };
    let model = match &file.module {
        None => ModuleModel::Regular,
        Some(m) => match m.kind.as_str() {
            "regular" => {
                if m.rep.is_some() || m.structure.is_some() {
                    return Err(Error::scenario("module", "the regular model takes no bundle data"));
                }
                ModuleModel::Regular
            }
            "bundle" => {
                let name = m.rep.as_deref().ok_or_else(|| Error::scenario("module.rep", "missing bundle representation"))?;
                let rep = find_rep(name, "module.rep")?;
                let structure = match &m.structure {
                    Some(rows) => parse_matrix(&ctx, rows, rep.dim(), "module.structure")?,
                    None => FieldMatrix::identity(&ctx, rep.dim()),
                };
                ModuleModel::bundle(name, rep, structure).map_err(|e| Error::scenario("module.structure", e.to_string()))?
            }
            other => return Err(Error::scenario("module.kind", format!("unknown module kind {other:?}"))),
        },
    };
    for (i, n) in file.checks.span_reps.iter().enumerate() {
        find_rep(n, &format!("checks.span_reps[{i}]"))?;
    }
    let enum_opts = EnumerateOptions { max_nodes: opts.max_search_nodes, reduce_first_generator: false };
    let char_groupoid =
        Arc::new(CharGroupoid::build(&presentation, &group, enum_opts).map_err(|e| Error::scenario("presentation", e.to_string()))?);
    match validate_phi_on(char_groupoid.homs(), &presentation, &phi, &group)? {
        PhiCheck::Ok => {}
        PhiCheck::Counterexample { hom, relator } => {
            let imgs: Vec<String> = hom.images.iter().map(|&x| group.element(x).to_string()).collect();
            return Err(Error::scenario(
                "phi",
                format!(
                    "ρ∘φ violates relator {} for ρ = ({})",
                    presentation.relators[relator].display(&names),
                    imgs.join(", ")
                ),
            ));
        }
    }
    let fixed = Arc::new(fixed_groupoid_pairs(&char_groupoid, &phi)?);
    let frobenius = char_groupoid
        .homs()
        .iter()
        .map(|rho| {
            let pulled = phi.pull_back(&rho.images, &group)?;
            char_groupoid
                .index_of(&crate::groups::GroupHom { images: pulled })
                .ok_or_else(|| Error::scenario("phi", "ρ∘φ is not a homomorphism"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Scenario {
        name: file.name.clone(),
        description: file.description.clone(),
        presentation,
        phi,
        group,
        ctx,
        reps,
        model,
        span_reps: file.checks.span_reps.clone(),
        loop_length: file.checks.loop_length,
        char_groupoid,
        fixed,
        frobenius,
        algebra: OnceLock::new(),
    })
}

/// Load a scenario from a built-in name or a file path.
pub fn load_scenario(spec: &str, opts: BuildOptions) -> Result<Scenario> {
    if let Some(src) = builtin_source(spec) {
        return build_scenario(&ScenarioFile::parse(src)?, opts);
    }
    let src = std::fs::read_to_string(spec)
        .map_err(|e| Error::Io(format!("{spec:?} is neither a built-in scenario nor a readable file: {e}")))?;
    let file = ScenarioFile::parse(&src).map_err(|e| match e {
        Error::Scenario { path, msg } => Error::Scenario { path: format!("{spec}: {path}"), msg },
        other => other,
    })?;
    build_scenario(&file, opts).map_err(|e| match e {
        Error::Scenario { path, msg } => Error::Scenario { path: format!("{spec}: {path}"), msg },
        other => other,
    })
}
