use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use entrochar::characterisation::{reconstruct_scalar_with, MatchOptions, MAX_MATCH_SUPPORT};
use entrochar::entropy_lp::{EntropySpacePoint, GroundSet, LpOptions};
use entrochar::io::{parse_aux, parse_distribution, parse_network, LoadedDistribution};
use entrochar::netcode::{
    example_network, membership_with, scale_query_with, AuxSpec, BoundOptions, EdgeModel, Membership, Verdict,
};
use entrochar::{
    oracle_from_distribution, scalar_equivalent, subset_entropy, vector_equivalent, verify_partition_match,
    NetworkSpec, RandomVectorDistribution, Relabeling, Tolerances, VarSet,
};
use serde_json::{json, Map, Value};

use crate::{Cli, Command, EdgeModelArg, ExampleAux, Failure, Instance, Mode, NetQuery};

/// Branch-selection tolerance used by reconstruction.
const BRANCH_TOL: f64 = 1e-8;

type Output = Result<(Value, String), Failure>;

pub fn run(cli: &Cli) -> Output {
    match &cli.command {
        Command::Entropy { dist } => entropy(&load_dist(dist)?),
        Command::Reconstruct { dist, n } => reconstruct(cli, &load_dist(dist)?, *n),
        Command::Equiv { p, q, mode } => equiv(cli, &load_dist(p)?, &load_dist(q)?, *mode),
        Command::Netbound { query } => netbound(cli, query),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::from)
}

fn load_dist(path: &Path) -> Result<LoadedDistribution, Failure> {
    parse_distribution(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn tolerances(cli: &Cli) -> Tolerances {
    Tolerances {
        entropy: cli.tol_entropy,
        lp: cli.tol_lp,
        ..Tolerances::default()
    }
}

fn entropy(d: &LoadedDistribution) -> Output {
    let mut rows = Vec::new();
    let mut table = String::new();
    let full = VarSet::full(d.dist.arity());
    let mut subsets: Vec<VarSet> = full.nonempty_subsets().collect();
    subsets.sort_by_key(|s| (s.len(), s.bits()));
    for s in subsets {
        let names: Vec<&str> = s.iter().map(|i| d.coords[i].as_str()).collect();
        let bits = subset_entropy(&d.dist, s)?;
        writeln!(table, "{{{}}}\t{bits}", names.join(",")).expect("writing to a String");
        rows.push(json!({"subset": names, "bits": bits}));
    }
    Ok((json!({"status": "ok", "entropies": rows}), table))
}

fn reconstruct(cli: &Cli, d: &LoadedDistribution, n: Option<usize>) -> Output {
    let joint = d.joint();
    let n = n.unwrap_or(joint.len());
    if n != joint.len() {
        return Err(Failure::Input(format!("--n {n} but the distribution has {} atoms", joint.len())));
    }
    let oracle = oracle_from_distribution(joint)?;
    let tol = tolerances(cli);
    let probs = reconstruct_scalar_with(&oracle, n, &tol)?;
    let err = probs
        .iter()
        .zip(joint.sorted_probs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut table = String::new();
    for p in &probs {
        writeln!(table, "{p}").expect("writing to a String");
    }
    writeln!(table, "# max abs error {err:e}; entropy tol {}, branch tol {BRANCH_TOL}", tol.entropy)
        .expect("writing to a String");
    Ok((
        json!({
            "status": "ok",
            "n": n,
            "probs": probs,
            "max_abs_error": err,
            "tolerances": {"entropy": tol.entropy, "branch": BRANCH_TOL},
            "entropy_queries": oracle.computations(),
        }),
        table,
    ))
}

fn relabeling_json(r: &Relabeling) -> Value {
    json!(r.maps)
}

fn equiv(cli: &Cli, p: &LoadedDistribution, q: &LoadedDistribution, mode: Mode) -> Output {
    let (witness, depth, sampled) = match mode {
        Mode::Scalar => {
            let w = scalar_equivalent(p.joint(), q.joint());
            let n = p.joint().len().max(q.joint().len());
            let (depth, sampled) = if (2..=MAX_MATCH_SUPPORT).contains(&n) {
                let opts = MatchOptions {
                    tol_entropy: cli.tol_entropy,
                    seed: cli.seed,
                    ..MatchOptions::default()
                };
                match verify_partition_match(p.joint(), q.joint(), &opts)? {
                    Some(m) => (Some(m.verified_depth), Some(m.sampled)),
                    None => (None, None),
                }
            } else {
                (None, None)
            };
            (w, depth, sampled)
        }
        Mode::Vector => {
            if p.dist.arity() != q.dist.arity() {
                (None, None, None)
            } else {
                (vector_equivalent(&p.dist, &q.dist)?, None, None)
            }
        }
    };
    let equivalent = witness.is_some();
    let status = if equivalent { "ok" } else { "not-equivalent" };
    let mut table = format!("{status}\n");
    if let Some(w) = &witness {
        for (m, map) in w.maps.iter().enumerate() {
            for (a, b) in map {
                writeln!(table, "{m}\t{a}\t{b}").expect("writing to a String");
            }
        }
    }
    Ok((
        json!({
            "status": status,
            "mode": match mode { Mode::Scalar => "scalar", Mode::Vector => "vector" },
            "equivalent": equivalent,
            "witness": witness.as_ref().map(relabeling_json),
            "verified_depth": depth,
            "sampled": sampled,
        }),
        table,
    ))
}

fn bound_options(cli: &Cli, model: EdgeModelArg) -> BoundOptions {
    BoundOptions {
        edge_model: match model {
            EdgeModelArg::Economical => EdgeModel::Economical,
            EdgeModelArg::Explicit => EdgeModel::Explicit,
        },
        lp: LpOptions {
            tol: cli.tol_lp,
            ..LpOptions::default()
        },
    }
}

fn load_instance(inst: &Instance) -> Result<(NetworkSpec, RandomVectorDistribution, AuxSpec), Failure> {
    let net = parse_network(&read(&inst.network)?).map_err(|e| Failure::Input(format!("{}: {e}", inst.network.display())))?;
    let src = load_dist(&inst.sources)?.dist;
    let aux = match &inst.aux {
        Some(path) => parse_aux(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => AuxSpec::none(),
    };
    Ok((net, src, aux))
}

fn point_json(g: &GroundSet, h: &EntropySpacePoint) -> Value {
    let mut m = Map::new();
    for s in g.full().nonempty_subsets().collect::<Vec<_>>().into_iter().rev() {
        m.insert(g.format_set(s), json!(h.get(s)));
    }
    Value::Object(m)
}

fn membership_output(m: &Membership, dump: Option<&Path>) -> Output {
    let text = m.problem.dump();
    if let Some(path) = dump {
        fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(|e| Failure::Internal(format!("{e:#}")))?;
    }
    let (status, verdict, gap, witness) = match &m.verdict {
        Verdict::InBound(h) => ("ok", "InBound", None, Some(point_json(&m.problem.ground, h))),
        Verdict::OutOfBound { gap } => ("infeasible", "OutOfBound", Some(*gap), None),
    };
    let table = format!(
        "{verdict}\nground variables\t{}\nrows\t{}\n{}",
        m.problem.ground.len(),
        m.problem.constraints.len(),
        gap.map(|g| format!("gap\t{g}\n")).unwrap_or_default()
    );
    Ok((
        json!({
            "status": status,
            "verdict": verdict,
            "gap": gap,
            "capacities": m.problem.capacities.iter().map(|(e, c)| json!({"edge": e, "capacity": c})).collect::<Vec<_>>(),
            "ground": m.problem.ground.names(),
            "rows": m.problem.counts,
            "witness": witness,
            "lp_dump": text,
        }),
        table,
    ))
}

fn netbound(cli: &Cli, query: &NetQuery) -> Output {
    match query {
        NetQuery::Check { instance, c, dump } => {
            let (net, src, aux) = load_instance(instance)?;
            let caps = c.clone().unwrap_or_else(|| net.capacities());
            let m = membership_with(&net, &src, &aux, &caps, &bound_options(cli, instance.edge_model))?;
            membership_output(&m, dump.as_deref())
        }
        NetQuery::Scale { instance, direction } => {
            let (net, src, aux) = load_instance(instance)?;
            let dir = direction.clone().unwrap_or_else(|| net.capacities());
            let s = scale_query_with(&net, &src, &aux, &dir, &bound_options(cli, instance.edge_model))?;
            let status = if s.t.is_some() { "ok" } else { "infeasible" };
            let table = match s.t {
                Some(t) => format!("t\t{t}\n"),
                None => "no multiple of the direction is in the bound\n".into(),
            };
            Ok((json!({"status": status, "direction": dir, "t": s.t}), table))
        }
        NetQuery::Example { aux, c, dump } => {
            let (net, src, bits) = example_network();
            let aux = match aux {
                ExampleAux::None => AuxSpec::none(),
                ExampleAux::Bits => bits,
            };
            let m = membership_with(&net, &src, &aux, c, &bound_options(cli, EdgeModelArg::Economical))?;
            membership_output(&m, dump.as_deref())
        }
    }
}
