//! Command-line front end. [`run`] takes the argument list and two output
//! streams and returns the process exit code: 0 on success, 1 when a check
//! or computation fails, 2 on usage errors. Diagnostics start with `error:`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use braidbound::rational::{canonical, int, parse as parse_rational, Q};
use braidbound::symprod::{
    action_difference, boundary_winding, elementary_model, sigma_contraction_model,
    signed_intersections, Homotopy, Intersections,
};
use braidbound::{
    expand_restricted, exponent_summary, f_generator, f_max_closed, f_max_lp, f_value,
    hofer_lower_bound, parse_word, z_last_word, AlphabetMode, BraidWord, ExponentSummary,
    LambdaInterval, Letter, LinkConfig, LinkParams, WeightPair, WeightVector,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

mod checks;

#[derive(Debug, Parser)]
#[command(name = "braidbound", version, about = "Hofer-norm lower bounds from braid types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower bound on the Hofer norm for a braid word.
    Bound {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Value of f_{v1,v2} on a word at explicit weight vectors.
    Eval {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Comma-separated rationals, one per boundary component.
        #[arg(long)]
        v1: String,
        #[arg(long)]
        v2: String,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form and vertex-enumeration maxima with their maximizers.
    Maximize {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Also list |f| at every vertex pair.
        #[arg(long)]
        vertices: bool,
        #[arg(long)]
        json: bool,
    },
    /// Expand c letters into b^-1 a b and print the last boundary loop.
    Expand {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
    },
    /// Check the boundary relation and the generator identities on random weights.
    CheckRelations {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Signed intersections of a homotopy with the diagonal of Sym^2(C).
    Intersect {
        #[arg(long, conflicts_with = "model", required_unless_present = "model")]
        homotopy: Option<PathBuf>,
        #[arg(long, value_enum)]
        model: Option<Model>,
        /// Grid intervals per side for built-in models.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Elementary,
    Sigma,
}

#[derive(Debug, Args)]
struct LinkArgs {
    /// JSON file with k, g, p, lambda and optionally area; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Contractible circles of the link.
    #[arg(long)]
    k: Option<u32>,
    /// Genus of the surface (one non-contractible circle per handle).
    #[arg(long)]
    g: Option<u32>,
    /// Boundary components of the surface.
    #[arg(long)]
    p: Option<u32>,
    /// Area of each disc, e.g. 2/5.
    #[arg(long)]
    lambda: Option<String>,
    /// Total area of the surface (default 1).
    #[arg(long)]
    area: Option<String>,
    /// Require lambda strictly above A/(k+1).
    #[arg(long)]
    strict: bool,
}

/// Failure kinds, mapped to exit codes.
enum Failure {
    Usage(String),
    Check(String),
}

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Failure::Usage(msg.to_string())
    }

    fn check(msg: impl ToString) -> Self {
        Failure::Check(msg.to_string())
    }
}

type Outcome = Result<bool, Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Bound { link, word, json } => {
            let params = link.resolve()?;
            let word = restricted_word(&params, &word)?;
            let report = hofer_lower_bound(&params, &word).map_err(Failure::check)?;
            if json {
                emit(out, &serde_json::to_string(&report).expect("report serializes"))?;
            } else {
                let lines = [
                    ("parameters", describe(&params)),
                    ("word", word.to_string()),
                    ("summary", describe_summary(&report.summary)),
                    (
                        "terms",
                        format!(
                            "R={} S={} T={} D={}",
                            canonical(&report.terms.r),
                            canonical(&report.terms.s),
                            canonical(&report.terms.t),
                            canonical(&report.terms.d)
                        ),
                    ),
                    ("f_max", canonical(&report.f_max)),
                    ("witness", describe_pair(&report.argmax)),
                    ("half_bound", canonical(&report.half_bound)),
                    ("asymptotic", canonical(&report.asymptotic_bound)),
                ];
                for (label, value) in lines {
                    emit(out, &format!("{label:<12} {value}"))?;
                }
            }
            Ok(true)
        }
        Command::Eval {
            link,
            word,
            v1,
            v2,
            json,
        } => {
            let params = link.resolve()?;
            let word = restricted_word(&params, &word)?;
            let pair = WeightPair::new(weights(&params, &v1)?, weights(&params, &v2)?);
            let summary = exponent_summary(&word).map_err(Failure::usage)?;
            let value = f_value(&params, &pair, &summary);
            if json {
                let doc = serde_json::json!({
                    "value": canonical(&value),
                    "eta_diff": canonical(&params.eta_diff(&pair)),
                });
                emit(out, &doc.to_string())?;
            } else {
                emit(out, &format!("f          {}", canonical(&value)))?;
                emit(out, &format!("eta2-eta1  {}", canonical(&params.eta_diff(&pair))))?;
            }
            Ok(true)
        }
        Command::Maximize {
            link,
            word,
            vertices,
            json,
        } => {
            let params = link.resolve()?;
            let word = restricted_word(&params, &word)?;
            let summary = exponent_summary(&word).map_err(Failure::usage)?;
            maximize(out, &params, &summary, vertices, json)
        }
        Command::Expand { link, word } => {
            let params = link.resolve()?;
            if let Some(text) = word {
                let word = restricted_word(&params, &text)?;
                emit(out, &format!("word       {word}"))?;
                emit(out, &format!("expanded   {}", expand_restricted(&word)))?;
            }
            let zp = z_last_word(params.signature());
            emit(out, &format!("z{}         {zp}", params.p))?;
            emit(out, &format!("z{} full    {}", params.p, expand_restricted(&zp)))?;
            let summary = exponent_summary(&zp).expect("restricted by construction");
            emit(out, &format!("summary    {}", describe_summary(&summary)))?;
            Ok(true)
        }
        Command::CheckRelations {
            link,
            seed,
            samples,
        } => {
            let params = link.resolve()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let results = checks::run_all(&params, &mut rng, samples);
            let mut all = true;
            for r in &results {
                let status = if r.failures == 0 { "PASS" } else { "FAIL" };
                all &= r.failures == 0;
                emit(
                    out,
                    &format!("[{status}] {} ({} cases, {} failed)", r.name, r.cases, r.failures),
                )?;
            }
            Ok(all)
        }
        Command::Intersect {
            homotopy,
            model,
            grid,
            tol,
            json,
        } => {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::usage("--tol must be a positive number"));
            }
            let h = match (homotopy, model) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    Homotopy::from_json(&text).map_err(Failure::usage)?
                }
                (None, Some(Model::Elementary)) => elementary_model(grid, grid).map_err(Failure::usage)?,
                (None, Some(Model::Sigma)) => sigma_contraction_model(grid, grid).map_err(Failure::usage)?,
                (None, None) => return Err(Failure::usage("need --homotopy or --model")),
            };
            intersect(out, &h, tol, json)
        }
    }
}

#[derive(Serialize)]
struct IntersectDoc<'a> {
    #[serde(flatten)]
    found: &'a Intersections,
    boundary_winding: i64,
    consistent: bool,
}

fn intersect(out: &mut dyn Write, h: &Homotopy, tol: f64, json: bool) -> Outcome {
    let found = signed_intersections(h, tol).map_err(Failure::check)?;
    let winding = boundary_winding(h).map_err(Failure::check)?;
    let consistent = winding == found.total;
    if json {
        let doc = IntersectDoc {
            found: &found,
            boundary_winding: winding,
            consistent,
        };
        // Through Value so keys come out sorted, like the other JSON outputs.
        let value = serde_json::to_value(&doc).expect("serializes");
        emit(out, &value.to_string())?;
    } else {
        for r in &found.records {
            emit(
                out,
                &format!(
                    "cell ({}, {})  s={:.12} t={:.12}  sign {:+}",
                    r.cell.0, r.cell.1, r.location.0, r.location.1, r.sign
                ),
            )?;
        }
        emit(out, &format!("intersections     {}", found.records.len()))?;
        emit(out, &format!("signed total      {}", found.total))?;
        emit(out, &format!("boundary winding  {winding}"))?;
    }
    if !consistent {
        return Err(Failure::check(format!(
            "signed total {} differs from boundary winding {winding}",
            found.total
        )));
    }
    Ok(true)
}

fn maximize(
    out: &mut dyn Write,
    params: &LinkParams,
    summary: &ExponentSummary,
    vertices: bool,
    json: bool,
) -> Outcome {
    let (closed, witness) = f_max_closed(params, summary);
    let (lp, argmax) = f_max_lp(params, summary);
    let sweep: Vec<(usize, usize, Q)> = if vertices {
        let vs = params.weight_vertices();
        let mut rows = Vec::new();
        for (i, v1) in vs.iter().enumerate() {
            for (j, v2) in vs.iter().enumerate() {
                let pair = WeightPair::new(v1.clone(), v2.clone());
                rows.push((i, j, f_value(params, &pair, summary)));
            }
        }
        rows
    } else {
        Vec::new()
    };
    if json {
        let pair_doc = |value: &Q, pair: &WeightPair| {
            serde_json::json!({
                "value": canonical(value),
                "v1": pair.v1.to_strings(),
                "v2": pair.v2.to_strings(),
            })
        };
        let mut doc = serde_json::json!({
            "closed": pair_doc(&closed, &witness),
            "lp": pair_doc(&lp, &argmax),
            "agree": closed == lp,
        });
        if vertices {
            doc["vertices"] = sweep
                .iter()
                .map(|(i, j, v)| serde_json::json!({"v1": i, "v2": j, "f": canonical(v)}))
                .collect();
        }
        emit(out, &doc.to_string())?;
    } else {
        emit(out, &format!("closed form  {}  at {}", canonical(&closed), describe_pair(&witness)))?;
        emit(out, &format!("vertex sweep {}  at {}", canonical(&lp), describe_pair(&argmax)))?;
        if vertices {
            emit(out, "vertex pairs (0 = origin, j = s_max on slot j):")?;
            for (i, j, v) in &sweep {
                emit(out, &format!("  ({i}, {j})  f = {}", canonical(v)))?;
            }
        }
    }
    if closed != lp {
        return Err(Failure::check("closed form and vertex enumeration disagree"));
    }
    Ok(true)
}

impl LinkArgs {
    /// Merges the config file with explicit flags and validates the result.
    fn resolve(&self) -> Result<LinkParams, Failure> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                Some(
                    serde_json::from_str::<LinkConfig>(&text)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
                )
            }
            None => None,
        };
        let pick = |flag: Option<u32>, from_cfg: Option<u32>, name: &str| {
            flag.or(from_cfg)
                .ok_or_else(|| Failure::usage(format!("missing --{name} (or --config)")))
        };
        let k = pick(self.k, cfg.as_ref().map(|c| c.k), "k")?;
        let g = pick(self.g, cfg.as_ref().map(|c| c.g), "g")?;
        let p = pick(self.p, cfg.as_ref().map(|c| c.p), "p")?;
        let lambda = match &self.lambda {
            Some(text) => parse_rational(text).map_err(Failure::usage)?,
            None => cfg
                .as_mut()
                .map(|c| c.lambda.0.clone())
                .ok_or_else(|| Failure::usage("missing --lambda (or --config)"))?,
        };
        let area = match &self.area {
            Some(text) => parse_rational(text).map_err(Failure::usage)?,
            None => cfg
                .and_then(|c| c.area)
                .map_or_else(|| int(1), |a| a.0),
        };
        let params = LinkParams {
            k,
            g,
            p,
            lambda,
            ambient_area: area,
        };
        let interval = if self.strict {
            LambdaInterval::Open
        } else {
            LambdaInterval::HalfOpen
        };
        params.validate_with(interval).map_err(Failure::usage)?;
        Ok(params)
    }
}

fn restricted_word(params: &LinkParams, text: &str) -> Result<BraidWord, Failure> {
    parse_word(text, params.signature(), AlphabetMode::Restricted).map_err(Failure::usage)
}

fn weights(params: &LinkParams, text: &str) -> Result<WeightVector, Failure> {
    let entries = if text.trim().is_empty() {
        Vec::new()
    } else {
        text.split(',')
            .map(|s| parse_rational(s).map_err(Failure::usage))
            .collect::<Result<Vec<_>, _>>()?
    };
    params.weight(entries).map_err(Failure::usage)
}

fn emit(out: &mut dyn Write, line: &str) -> Result<(), Failure> {
    writeln!(out, "{line}").map_err(|e| Failure::check(format!("write failed: {e}")))
}

fn describe(params: &LinkParams) -> String {
    format!(
        "k={} g={} p={} lambda={} area={}",
        params.k,
        params.g,
        params.p,
        canonical(&params.lambda),
        canonical(&params.ambient_area)
    )
}

fn describe_summary(s: &ExponentSummary) -> String {
    format!("k_gen={} k_sigma={} k={:?}", s.k_gen, s.k_sigma, s.k)
}

fn describe_vector(v: &WeightVector) -> String {
    let parts: Vec<String> = v.entries().iter().map(canonical).collect();
    format!("({})", parts.join(", "))
}

fn describe_pair(pair: &WeightPair) -> String {
    format!("v1={} v2={}", describe_vector(&pair.v1), describe_vector(&pair.v2))
}

pub(crate) fn random_word_for<R: Rng>(params: &LinkParams, rng: &mut R, max_len: usize) -> BraidWord {
    let sig = params.signature();
    let k = sig.contractible();
    let mut pool: Vec<Letter> = Vec::new();
    for i in 1..k {
        pool.push(Letter::sigma(i, 1));
    }
    for i in 1..=sig.genus() {
        pool.push(Letter::a(i, 1));
        pool.push(Letter::c(i, 1));
    }
    for l in 1..sig.punctures() {
        pool.push(Letter::z(l, 1));
    }
    let len = if pool.is_empty() { 0 } else { rng.gen_range(0..=max_len) };
    let letters = (0..len)
        .map(|_| {
            let base = pool[rng.gen_range(0..pool.len())];
            let e = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=3);
            Letter::new(base.kind, base.index, e)
        })
        .collect();
    BraidWord::from_letters(sig, AlphabetMode::Restricted, letters).expect("letters drawn in range")
}

pub(crate) fn generator_value(params: &LinkParams, pair: &WeightPair, letter: Letter) -> Q {
    f_generator(params, pair, letter).expect("restricted letter")
}

pub(crate) fn action_value(params: &LinkParams, pair: &WeightPair, n_delta: i64, m: &[i64]) -> Q {
    action_difference(params, pair, n_delta, m).expect("m has p entries")
}
