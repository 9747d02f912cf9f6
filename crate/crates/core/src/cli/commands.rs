use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::documents::{load_family, load_quiver, parse_dims, parse_indices, QuiverDocument};
use super::report::Report;
use super::{
    Cli, CliError, Command, GlobalOptions, OracleKind, QuiverDims, Target, EXIT_DISAGREEMENT, EXIT_NOT_INTERSECTING,
    EXIT_OK,
};
use crate::augment::{augment, cross_check, lift_family, satisfies_jump_condition};
use crate::brute::{count_stable_points, estimate_p_membership};
use crate::cone::{
    compute_cone, extreme_rays, irredundant_facets, orbit_reduce, sigma_restriction, ConeDescription, Generators,
};
use crate::ext_oracle::{subquotient_dims, OracleParams};
use crate::family::{edim, filtered_euler, quotient_profile, sub_profile, Subset, SubsetFamily};
use crate::horn::{
    belkale_member, enumerate_intersecting, enumerate_schofield, schofield_member, stabilizer, HornEngine, HornQuery,
};
use crate::quiver::{quiver_automorphisms, DimensionVector, Quiver, QuiverAutomorphism};

type Outcome = Result<(Report, i32), CliError>;

pub(super) fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Check { target, restrict_arrows, oracle } => check(g, target, restrict_arrows.as_deref(), *oracle),
        Command::Enumerate { target, edim_zero, up_to_symmetry } => enumerate(target, *edim_zero, *up_to_symmetry),
        Command::Schofield { target, alpha, up_to_symmetry } => schofield(target, alpha.as_deref(), *up_to_symmetry),
        Command::Belkale { s, r, n, k } => belkale(*s, *r, *n, k),
        Command::Cone { target, rays, facets, sigma, up_to_symmetry } => {
            cone(target, *rays, *facets, *sigma, *up_to_symmetry)
        }
        Command::Augment { target, output } => augment_cmd(target, output.as_deref()),
        Command::OracleExt { target } => oracle_ext(g, target),
        Command::OracleBrute { target } => oracle_brute(g, target),
        Command::Symmetry { target } => symmetry(target),
    }
}

/// Everything a command may need from its positional and family arguments.
struct Inputs {
    document: QuiverDocument,
    quiver: Quiver,
    dims: Option<DimensionVector>,
    ambient: Option<SubsetFamily>,
    candidate: Option<SubsetFamily>,
}

impl Inputs {
    fn from_target(t: &Target) -> Result<Self, CliError> {
        let mut inputs = Self::from_quiver(&t.quiver, t.dims.as_deref())?;
        if let Some(path) = &t.family {
            let doc = load_family(path)?;
            inputs.ambient = doc.ambient(&inputs.quiver)?;
            inputs.candidate = doc.candidate(&inputs.quiver)?;
        }
        if let Some(j) = &t.ambient {
            inputs.ambient = Some(shorthand(j, &inputs.quiver)?);
        }
        if let Some(k) = &t.candidate {
            inputs.candidate = Some(shorthand(k, &inputs.quiver)?);
        }
        if inputs.ambient.is_none() {
            inputs.ambient = inputs.dims.as_ref().map(SubsetFamily::standard);
        }
        if inputs.dims.is_none() {
            inputs.dims = inputs.ambient.as_ref().map(SubsetFamily::cardinalities);
        }
        Ok(inputs)
    }

    fn from_quiver(source: &str, dims: Option<&str>) -> Result<Self, CliError> {
        let document = load_quiver(source)?;
        let quiver = document.quiver()?;
        let dims = match dims {
            Some(text) => Some(parse_dims(text)?),
            None => document.dims(&quiver)?,
        };
        if let Some(d) = &dims {
            d.check_domain(&quiver, "dims")?;
        }
        Ok(Self { document, quiver, dims, ambient: None, candidate: None })
    }

    fn from_quiver_dims(t: &QuiverDims) -> Result<Self, CliError> {
        Self::from_quiver(&t.quiver, t.dims.as_deref())
    }

    fn dims(&self) -> Result<&DimensionVector, CliError> {
        self.dims.as_ref().ok_or_else(|| CliError::Usage("no dimension vector given (use --dims)".into()))
    }

    fn ambient(&self) -> Result<&SubsetFamily, CliError> {
        self.ambient.as_ref().ok_or_else(|| {
            CliError::Usage("no ambient family given (use a family document, --ambient or --dims)".into())
        })
    }

    fn candidate(&self) -> Result<&SubsetFamily, CliError> {
        self.candidate
            .as_ref()
            .ok_or_else(|| CliError::Usage("no candidate family given (use a family document or --candidate)".into()))
    }

    fn digest_value(&self) -> Value {
        json!({
            "quiver": self.document,
            "dims": self.dims.as_ref().map(|d| d.0.clone()),
            "J": self.ambient.as_ref().map(SubsetFamily::shorthand),
            "K": self.candidate.as_ref().map(SubsetFamily::shorthand),
        })
    }

    fn report(&self, command: &str, arguments: Value) -> Report {
        Report::new(command, arguments, &self.digest_value())
    }
}

fn shorthand(text: &str, quiver: &Quiver) -> Result<SubsetFamily, CliError> {
    let family = SubsetFamily::parse_shorthand(text)?;
    family.check_domain(quiver, "family")?;
    Ok(family)
}

fn target_args(t: &Target) -> Value {
    json!({
        "quiver": t.quiver,
        "family": t.family.as_ref().map(|p| p.display().to_string()),
        "dims": t.dims,
        "ambient": t.ambient,
        "candidate": t.candidate,
    })
}

fn oracle_params(g: &GlobalOptions) -> OracleParams {
    OracleParams { trials: g.trials, seed: g.seed, prime: g.prime }
}

fn row_value(row: &[BigInt]) -> Value {
    Value::Array(
        row.iter().map(|x| x.to_i64().map(Value::from).unwrap_or_else(|| Value::from(x.to_string()))).collect(),
    )
}

fn rows_value(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(rows.iter().map(|r| row_value(r)).collect())
}

fn vectors_value(vs: &[DimensionVector]) -> Value {
    Value::Array(vs.iter().map(|v| json!(v.0)).collect())
}

fn families_value(fs: &[SubsetFamily]) -> Value {
    Value::Array(fs.iter().map(|f| Value::from(f.shorthand())).collect())
}

fn check(g: &GlobalOptions, t: &Target, restrict: Option<&str>, oracle: OracleKind) -> Outcome {
    let inputs = Inputs::from_target(t)?;
    let (q, j, k) = (&inputs.quiver, inputs.ambient()?, inputs.candidate()?);
    let restricted = restrict.map(parse_indices).transpose()?.unwrap_or_default();
    let query = HornQuery::restricted(q, j.clone(), k.clone(), restricted.clone())?;
    let verdict = HornEngine::global().verdict(&query);
    let mut args = target_args(t);
    args["restrict_arrows"] = json!(restricted);
    args["oracle"] = json!(format!("{oracle:?}").to_lowercase());
    let mut report = inputs.report("check", args);
    report
        .set("intersecting", verdict.member)
        .set("edim", verdict.edim)
        .set("ambient", j.shorthand())
        .set("candidate", k.shorthand());
    match &verdict.witness {
        Some(l) => {
            report
                .set("witness", l.shorthand())
                .set("witness_edim_in_candidate", edim(q, l, k)?)
                .set("witness_edim_in_ambient", edim(q, l, j)?);
        }
        None => {
            report.set("witness", Value::Null);
        }
    }
    let mut code = if verdict.member { EXIT_OK } else { EXIT_NOT_INTERSECTING };
    match oracle {
        OracleKind::None => {}
        OracleKind::Ext => {
            let params = oracle_params(g);
            report.param("seed", g.seed).param("trials", g.trials).param("prime", g.prime);
            let dims = subquotient_dims(q, k, j, &params)?;
            let agrees = (dims.ext == 0) == verdict.member;
            report.set(
                "oracle",
                json!({"kind": "ext", "hom": dims.hom, "ext": dims.ext, "intersecting": dims.ext == 0, "agrees": agrees}),
            );
            if !agrees {
                code = super::EXIT_DISAGREEMENT;
            }
        }
        OracleKind::Brute => {
            report.param("seed", g.seed).param("trials", g.trials).param("field_q", g.field_q);
            let counts = count_stable_points(q, k, j, g.field_q, g.trials, g.seed)?;
            report.set(
                "oracle",
                json!({"kind": "brute", "counts": counts.counts, "mode": counts.mode, "min": counts.min}),
            );
        }
    }
    Ok((report, code))
}

fn enumerate(t: &QuiverDims, edim_zero: bool, up_to_symmetry: bool) -> Outcome {
    let inputs = Inputs::from_quiver_dims(t)?;
    let dims = inputs.dims()?;
    let ambient = SubsetFamily::standard(dims);
    let families = enumerate_intersecting(&inputs.quiver, &ambient, edim_zero, up_to_symmetry)?;
    let schofield = enumerate_schofield(&inputs.quiver, dims, up_to_symmetry)?;
    let args = json!({"quiver": t.quiver, "dims": t.dims, "edim_zero": edim_zero, "up_to_symmetry": up_to_symmetry});
    let mut report = inputs.report("enumerate", args);
    report
        .set("dims", json!(dims.0))
        .set("count", families.len())
        .set("schofield_count", schofield.len())
        .set("families", families_value(&families))
        .set("schofield_vectors", vectors_value(&schofield));
    Ok((report, EXIT_OK))
}

fn schofield(t: &QuiverDims, alpha: Option<&str>, up_to_symmetry: bool) -> Outcome {
    let inputs = Inputs::from_quiver_dims(t)?;
    let dims = inputs.dims()?;
    let args = json!({"quiver": t.quiver, "dims": t.dims, "alpha": alpha, "up_to_symmetry": up_to_symmetry});
    let mut report = inputs.report("schofield", args);
    report.set("dims", json!(dims.0));
    if let Some(text) = alpha {
        let alpha = parse_dims(text)?;
        let member = schofield_member(&inputs.quiver, &alpha, dims)?;
        report.set("alpha", json!(alpha.0)).set("schofield", member);
        return Ok((report, if member { EXIT_OK } else { EXIT_NOT_INTERSECTING }));
    }
    let vectors = enumerate_schofield(&inputs.quiver, dims, up_to_symmetry)?;
    report.set("count", vectors.len()).set("vectors", vectors_value(&vectors));
    Ok((report, EXIT_OK))
}

fn belkale(s: usize, r: u32, n: u32, k: &str) -> Outcome {
    let family = SubsetFamily::parse_shorthand(k)?;
    let member = belkale_member(s, r, n, &family)?;
    let quiver = crate::catalog::horn(s);
    let ambient = SubsetFamily::new(vec![Subset::full(n); s + 1]);
    let expected = edim(&quiver, &family, &ambient)?;
    let args = json!({"s": s, "r": r, "n": n, "k": k});
    let mut report = Report::new("belkale", args.clone(), &args);
    report.set("intersecting", member).set("edim", expected);
    Ok((report, if member { EXIT_OK } else { EXIT_NOT_INTERSECTING }))
}

fn orbit_value(rows: &[Vec<BigInt>], autos: &[QuiverAutomorphism], dims: &DimensionVector) -> Result<Value, CliError> {
    let orbits = orbit_reduce(rows, autos, dims)?;
    Ok(Value::Array(
        orbits.iter().map(|o| json!({"representative": row_value(&o.representative), "size": o.size})).collect(),
    ))
}

fn cone_section(
    system: &ConeDescription<BigInt>,
    generators: &Generators<BigInt>,
    facets: &[Vec<BigInt>],
    flags: (bool, bool),
) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert(
        "coordinates".into(),
        json!(system.coordinates.iter().map(|(v, i)| format!("{v}:{i}")).collect::<Vec<_>>()),
    );
    map.insert("equalities".into(), rows_value(&system.equalities));
    map.insert("system_rows".into(), json!(system.inequalities.len()));
    map.insert("dimension".into(), json!(generators.dimension()));
    map.insert("lineality".into(), json!(generators.lines.len()));
    map.insert("rays_count".into(), json!(generators.rays.len()));
    map.insert("facets_count".into(), json!(facets.len()));
    if flags.0 {
        map.insert("rays".into(), rows_value(&generators.rays));
        map.insert("lines".into(), rows_value(&generators.lines));
    }
    if flags.1 {
        map.insert("facets".into(), rows_value(facets));
    }
    map
}

fn cone(t: &QuiverDims, rays: bool, facets: bool, sigma: bool, up_to_symmetry: bool) -> Outcome {
    let inputs = Inputs::from_quiver_dims(t)?;
    let q = &inputs.quiver;
    let dims = inputs.dims()?;
    let args = json!({"quiver": t.quiver, "dims": t.dims, "rays": rays, "facets": facets, "sigma": sigma, "up_to_symmetry": up_to_symmetry});
    let mut report = inputs.report("cone", args);
    let mut warnings = Vec::new();
    if !q.is_acyclic() {
        warnings.push("quiver has oriented cycles; the cone is computed but its weight interpretation does not apply");
    }
    let computed = compute_cone::<BigInt>(q, dims)?;
    report.set("dims", json!(dims.0));
    for (k, v) in cone_section(&computed.system, &computed.generators, &computed.facets, (rays, facets)) {
        report.set(&k, v);
    }
    if up_to_symmetry {
        let autos = stabilizer(q, dims.as_slice())?;
        let ray_orbits = orbit_value(&computed.generators.rays, &autos, dims)?;
        let facet_orbits = orbit_value(&computed.facets, &autos, dims)?;
        report
            .set("group_order", autos.len())
            .set("ray_orbit_count", ray_orbits.as_array().map_or(0, Vec::len))
            .set("facet_orbit_count", facet_orbits.as_array().map_or(0, Vec::len));
        if rays {
            report.set("ray_orbits", ray_orbits);
        }
        if facets {
            report.set("facet_orbits", facet_orbits);
        }
    }
    if sigma {
        let system = sigma_restriction::<BigInt>(q, dims)?;
        let generators = extreme_rays(&system)?;
        let sigma_facets = irredundant_facets(&system, &generators);
        let mut section = cone_section(&system, &generators, &sigma_facets, (rays, facets));
        section.insert("inequalities".into(), rows_value(&system.inequalities));
        report.set("sigma", Value::Object(section));
    }
    report.set("warnings", json!(warnings));
    Ok((report, EXIT_OK))
}

fn augment_cmd(t: &Target, output: Option<&std::path::Path>) -> Outcome {
    let inputs = Inputs::from_target(t)?;
    let q = &inputs.quiver;
    let j = inputs.ambient()?;
    let n = j.cardinalities();
    let aug = augment(q, &n)?;
    let doc = QuiverDocument::from_quiver(aug.quiver(), Some(aug.dims()));
    if let Some(path) = output {
        let text = serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n";
        std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut args = target_args(t);
    args["output"] = json!(output.map(|p| p.display().to_string()));
    let mut report = inputs.report("augment", args);
    report.set("augmented_quiver", serde_json::to_value(&doc).expect("documents serialize"));
    let mut code = EXIT_OK;
    if let Some(k) = &inputs.candidate {
        let alpha = lift_family(&aug, k, j)?;
        let lifted = cross_check(q, k, j)?;
        let direct = HornEngine::global().member(&HornQuery::new(q, j.clone(), k.clone())?);
        report
            .set("alpha", json!(alpha.0))
            .set("jump_condition", satisfies_jump_condition(&aug, &alpha))
            .set("schofield_on_augmented", lifted)
            .set("intersecting", direct)
            .set("agree", lifted == direct);
        if lifted != direct {
            code = EXIT_DISAGREEMENT;
        }
    }
    Ok((report, code))
}

fn oracle_ext(g: &GlobalOptions, t: &Target) -> Outcome {
    let inputs = Inputs::from_target(t)?;
    let (q, j, k) = (&inputs.quiver, inputs.ambient()?, inputs.candidate()?);
    let params = oracle_params(g);
    let dims = subquotient_dims(q, k, j, &params)?;
    let f = sub_profile(k, j)?;
    let gp = quotient_profile(k, j)?;
    let eul = filtered_euler(q, &f, &gp, &f.dims(), &gp.dims())?;
    let direct = HornEngine::global().member(&HornQuery::new(q, j.clone(), k.clone())?);
    let mut report = inputs.report("oracle-ext", target_args(t));
    report.param("seed", g.seed).param("trials", g.trials).param("prime", g.prime);
    report
        .set("hom", dims.hom)
        .set("ext", dims.ext)
        .set("rank", dims.rank)
        .set("rows", dims.rows)
        .set("cols", dims.cols)
        .set("filtered_euler", eul)
        .set("intersecting", dims.ext == 0)
        .set("horn_member", direct);
    let code = if (dims.ext == 0) != direct {
        EXIT_DISAGREEMENT
    } else if direct {
        EXIT_OK
    } else {
        EXIT_NOT_INTERSECTING
    };
    Ok((report, code))
}

fn oracle_brute(g: &GlobalOptions, t: &Target) -> Outcome {
    let inputs = Inputs::from_target(t)?;
    let (q, j, k) = (&inputs.quiver, inputs.ambient()?, inputs.candidate()?);
    let counts = count_stable_points(q, k, j, g.field_q, g.trials, g.seed)?;
    let point = estimate_p_membership(q, k, j, g.field_q, g.trials, g.seed)?;
    let mut report = inputs.report("oracle-brute", target_args(t));
    report.param("seed", g.seed).param("trials", g.trials).param("field_q", g.field_q);
    report
        .set("counts", json!(counts.counts))
        .set("mode", counts.mode)
        .set("min", counts.min)
        .set("single_point_estimate", point);
    Ok((report, EXIT_OK))
}

fn symmetry(t: &QuiverDims) -> Outcome {
    let inputs = Inputs::from_quiver_dims(t)?;
    let q = &inputs.quiver;
    let autos = quiver_automorphisms(q)?;
    let labelled = |g: &QuiverAutomorphism| -> Value {
        json!(g.images().iter().map(|&i| q.label(i).to_string()).collect::<Vec<_>>())
    };
    let mut report = inputs.report("symmetry", json!({"quiver": t.quiver, "dims": t.dims}));
    report.set("group_order", autos.len()).set("automorphisms", Value::Array(autos.iter().map(labelled).collect()));
    if let Some(d) = &inputs.dims {
        let stab = stabilizer(q, d.as_slice())?;
        report.set("stabilizer_order", stab.len());
    }
    Ok((report, EXIT_OK))
}
