use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semiflow::{wire, BallSet, MetricGraph, Rational, Result};
use serde_json::json;

mod selftest;

#[derive(Parser)]
#[command(name = "semiflow", version, about = "Closed-ball expansion on metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Graph document (JSON), or `-` for stdin.
    graph: PathBuf,
}

#[derive(Args)]
struct Units {
    /// Report offsets and radii on unit edges instead of input lengths.
    #[arg(long)]
    internal_units: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Normalised edge table, scale and diameter.
    Info {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
    },
    /// Radius, diameter, centers and extrema.
    Potential {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
    },
    /// Closed ball about a point.
    Ball {
        #[command(flatten)]
        input: GraphArg,
        /// Unit-edge index (see `info`).
        #[arg(long)]
        edge: usize,
        /// Offset on the unit edge, in [0,1].
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Radius in input length units.
        #[arg(long, allow_hyphen_values = true)]
        radius: String,
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
        #[command(flatten)]
        units: Units,
    },
    /// Quotient by ball equality at one radius.
    Project {
        #[command(flatten)]
        input: GraphArg,
        /// Radius in input length units.
        #[arg(long, allow_hyphen_values = true)]
        radius: String,
        #[arg(long, value_name = "PATH")]
        dot: Option<String>,
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
    },
    /// Topological type at every grid point and interval midpoint.
    Timeline {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long, value_name = "PATH")]
        csv: Option<String>,
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
        /// Append a decimal column next to the exact locus.
        #[arg(long)]
        approx: bool,
    },
    /// Bracket around the largest radius with an injective quotient.
    Robustness {
        #[command(flatten)]
        input: GraphArg,
        /// Also report the least merge radius among subdivision representatives.
        #[arg(long)]
        exact: bool,
    },
    /// Merge radii of sample points and their dendrogram.
    MergeTree {
        #[command(flatten)]
        input: GraphArg,
        /// Sample spacing `1/k` on unit edges.
        #[arg(long, allow_hyphen_values = true)]
        resolution: String,
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
        #[arg(long, value_name = "PATH")]
        csv: Option<String>,
        #[command(flatten)]
        units: Units,
    },
    /// Run the invariant checks on built-in fixtures.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(input: &GraphArg) -> Result<MetricGraph> {
    let text = if input.graph.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(&input.graph)?
    };
    semiflow::load_graph(&text)
}

fn emit(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        Ok(std::fs::write(path, content)?)
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn user_radius(g: &MetricGraph, s: &str) -> Result<Rational> {
    Ok(g.from_user(&s.parse()?))
}

/// Points and intervals of a set, naming vertices.
fn describe(g: &MetricGraph, b: &BallSet) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (e, c) in b.coverage().iter().enumerate() {
        for (lo, hi) in c.intervals() {
            if lo == hi {
                let p = g.point(e, lo.clone()).expect("coverage lies on its edge");
                let name = match g.point_vertex(&p) {
                    Some(v) => g.vertex_name(v).to_string(),
                    None => format!("e{}:{}", p.edge(), p.t()),
                };
                if !parts.contains(&name) {
                    parts.push(name);
                }
            } else {
                parts.push(format!("e{e}:[{lo},{hi}]"));
            }
        }
    }
    parts.join(" ")
}

fn info(g: &MetricGraph, json_out: Option<&str>) -> Result<()> {
    let edges: Vec<_> = (0..g.num_edges())
        .map(|e| {
            let ed = g.edge(e);
            let o = g.edge_origin(e);
            (e, g.vertex_name(ed.tail), g.vertex_name(ed.head), o.original, o.piece)
        })
        .collect();
    if let Some(path) = json_out {
        let rows: Vec<_> = edges
            .iter()
            .map(|(e, t, h, o, p)| json!({"edge": e, "tail": t, "head": h, "original": o, "piece": p}))
            .collect();
        let v = json!({
            "name": g.name(),
            "scale": g.scale().to_string(),
            "input_vertices": g.input_vertex_count(),
            "vertices": g.num_vertices(),
            "unit_edges": g.num_edges(),
            "diameter": g.to_user(&g.diameter()).to_string(),
            "edges": rows,
        });
        return emit(path, &pretty(&v));
    }
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", g.name());
    let _ = writeln!(out, "scale: {}", g.scale());
    let _ = writeln!(out, "input vertices: {}", g.input_vertex_count());
    let _ = writeln!(out, "unit edges: {}", g.num_edges());
    let _ = writeln!(out, "diameter: {}", g.to_user(&g.diameter()));
    out.push_str("edge\ttail\thead\toriginal\tpiece\n");
    for (e, t, h, o, p) in edges {
        let _ = writeln!(out, "{e}\t{t}\t{h}\t{o}\t{p}");
    }
    emit("-", &out)
}

fn potential(g: &MetricGraph, json_out: Option<&str>) -> Result<()> {
    let prof = g.potential_profile();
    if let Some(path) = json_out {
        let v = json!({
            "m": g.to_user(&prof.m).to_string(),
            "M": g.to_user(&prof.big_m).to_string(),
            "centers": wire::ball_json(g, &prof.centers, true),
            "extrema": wire::ball_json(g, &prof.extrema, true),
        });
        return emit(path, &pretty(&v));
    }
    let out = format!(
        "m: {}\nM: {}\ncenters: {}\nextrema: {}\n",
        g.to_user(&prof.m),
        g.to_user(&prof.big_m),
        describe(g, &prof.centers),
        describe(g, &prof.extrema)
    );
    emit("-", &out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Info { input, json } => info(&load(&input)?, json.as_deref()),
        Command::Potential { input, json } => potential(&load(&input)?, json.as_deref()),
        Command::Ball { input, edge, t, radius, json, units } => {
            let g = load(&input)?;
            let p = g.point(edge, t.parse()?)?;
            let b = semiflow::closed_ball(&g, &p, &user_radius(&g, &radius)?)?;
            let text = pretty(&wire::ball_json(&g, &b, !units.internal_units));
            emit(json.as_deref().unwrap_or("-"), &text)
        }
        Command::Project { input, radius, dot, json } => {
            let g = load(&input)?;
            let r = user_radius(&g, &radius)?;
            let q = semiflow::project(&g, &r)?;
            let f = semiflow::fingerprint(&q);
            let euler = semiflow::euler_bounds_check(&g, &q, &f)?;
            if let Some(path) = &dot {
                emit(path, &wire::quotient_dot(&q))?;
            }
            if let Some(path) = &json {
                let mut v = wire::quotient_json(&g, &q, &f);
                v["euler"] = wire::euler_json(&euler);
                emit(path, &pretty(&v))?;
            }
            if dot.is_none() && json.is_none() {
                let out = format!(
                    "radius: {radius} (internal {r})\nclasses: {} vertices, {} edges\nb0: {}\nb1: {}\nchi: {}\nn0: {}\n\
                     is_point: {}\ninjective: {}\ncanonical_code: {}\ndoubled_n0_margin: {}\n",
                    q.vertices.len(),
                    q.edges.len(),
                    f.b0,
                    f.b1,
                    f.chi,
                    f.n0,
                    f.is_point,
                    q.is_injective(),
                    f.canonical_code,
                    euler.doubled_n0_margin
                );
                emit("-", &out)?;
            }
            Ok(())
        }
        Command::Timeline { input, csv, json, approx } => {
            let g = load(&input)?;
            let t = semiflow::timeline(&g)?;
            if let Some(path) = &json {
                emit(path, &pretty(&wire::timeline_json(&g, &t)))?;
            }
            if csv.is_some() || json.is_none() {
                emit(csv.as_deref().unwrap_or("-"), &wire::timeline_csv(&g, &t, approx))?;
            }
            Ok(())
        }
        Command::Robustness { input, exact } => {
            let g = load(&input)?;
            let rob = semiflow::robustness_radius(&g)?;
            let mut out = format!(
                "bracket: [{}, {}]\nbracket_internal: [{}, {}]\n",
                g.to_user(&rob.radius),
                g.to_user(&rob.first_failure),
                rob.radius,
                rob.first_failure
            );
            if exact {
                let at = if rob.radius.is_positive() { &rob.radius } else { &rob.first_failure };
                let floor = semiflow::sampled_merge_floor(&g, at)?;
                let _ = writeln!(out, "exact: {} (internal {floor}, representatives at {at})", g.to_user(&floor));
            }
            emit("-", &out)
        }
        Command::MergeTree { input, resolution, json, csv, units } => {
            let g = load(&input)?;
            let res: Rational = resolution.parse()?;
            let pts = semiflow::sample_points(&g, &res)?;
            let tree = semiflow::build_merge_tree(&g, &pts)?;
            let user = !units.internal_units;
            if let Some(path) = &csv {
                emit(path, &wire::merge_matrix_csv(&g, &tree.matrix, user))?;
            }
            if json.is_some() || csv.is_none() {
                emit(json.as_deref().unwrap_or("-"), &pretty(&wire::dendrogram_json(&g, &tree, user)))?;
            }
            Ok(())
        }
        Command::Selftest { seed } => selftest::run(seed),
    }
}

/// 2 for rejected input, 3 for internal-consistency failures.
fn exit_status(e: &semiflow::Error) -> u8 {
    if e.is_internal() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.code());
            ExitCode::from(exit_status(&e))
        }
    }
}
