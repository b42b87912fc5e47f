use std::io::Write;

use agreeable_core::ballots::generate::{
    random_ballots_on_ball, uniform_all, uniform_ball, uniform_ring,
};
use agreeable_core::ballots::{complete_short_lists, concentric, normalize};
use agreeable_core::oracle::{brute_best, brute_minimax_grid};
use agreeable_core::tally::best_committees;
use agreeable_core::theory::{
    ball_bound_radius_limit, corollary1_bound, theorem1_bound, theorem2_bound,
    worst_case_concentric,
};
use agreeable_core::verify::{run_all, VerifyConfig};
use agreeable_core::{BallSpec, CandidateSubset, ElectionParams, Error, Rational, RawBallotFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Cli, Command, Format, GenerateMode};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_PARAMS: u8 = 3;
pub const EXIT_HYPOTHESIS: u8 = 4;

struct Output {
    human: String,
    structured: Value,
    code: u8,
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Ballot(_) | Error::Parse(_) | Error::Io(_) => EXIT_IO,
        Error::OutsideBall(_) | Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        Error::InvalidParams(_)
        | Error::InvalidArgument(_)
        | Error::SizeGuard(_)
        | Error::Overflow(_)
        | Error::Arithmetic(_) => EXIT_PARAMS,
    }
}

pub fn run(cli: &Cli) -> u8 {
    match dispatch(cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Human => out.human,
                Format::Structured => {
                    let mut s = serde_json::to_string_pretty(&out.structured)
                        .expect("json values serialize");
                    s.push('\n');
                    s
                }
            };
            if let Err(e) = emit(cli, &text) {
                eprintln!("error: {e}");
                return EXIT_IO;
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Tally { check_bounds } => cmd_tally(cli, *check_bounds),
        Command::Bounds => cmd_bounds(cli),
        Command::Verify {
            max_n,
            samples,
            summary,
            corrupt_b,
        } => cmd_verify(cli, *max_n, *samples, *summary, corrupt_b.as_deref()),
        Command::Generate {
            mode,
            weights,
            voters,
        } => cmd_generate(cli, *mode, weights.as_deref(), *voters),
        Command::WorstCase => cmd_worst_case(cli),
        Command::Oracle { grid } => cmd_oracle(cli, *grid),
    }
}

fn fmt_q(q: &Rational, decimal: bool) -> String {
    if decimal {
        format!("{q} (~{})", q.to_decimal_string(6))
    } else {
        q.to_string()
    }
}

fn required_params(cli: &Cli) -> Result<ElectionParams, Error> {
    let text = cli
        .params
        .as_deref()
        .ok_or_else(|| Error::InvalidParams("--params n,k,j is required".into()))?;
    ElectionParams::parse(text)
}

fn parse_center(cli: &Cli, params: &ElectionParams) -> Result<Option<CandidateSubset>, Error> {
    let Some(text) = cli.center.as_deref() else {
        return Ok(None);
    };
    let center = CandidateSubset::parse(text).map_err(|e| Error::InvalidParams(e.to_string()))?;
    params
        .check_list(&center)
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    Ok(Some(center))
}

/// Ball given by `--center` and `--radius`; both or neither.
fn parse_ball(cli: &Cli, params: &ElectionParams) -> Result<Option<BallSpec>, Error> {
    let center = parse_center(cli, params)?;
    match (center, cli.radius) {
        (None, None) => Ok(None),
        (Some(c), Some(r)) => Ok(Some(BallSpec::new(c, r, params)?)),
        _ => Err(Error::InvalidParams(
            "--center and --radius must be given together".into(),
        )),
    }
}

fn parse_alpha(cli: &Cli) -> Result<Option<Rational>, Error> {
    cli.alpha
        .as_deref()
        .map(|a| {
            a.parse::<Rational>()
                .map_err(|e| Error::InvalidParams(format!("--alpha: {e}")))
        })
        .transpose()
}

/// The floor guaranteed for distributions supported on `spec`: the closed
/// form when its hypothesis holds, the exact concentric minimax otherwise.
fn ball_floor(
    params: &ElectionParams,
    spec: &BallSpec,
) -> Result<(Option<Rational>, String, Value), Error> {
    if params.j < 2 || spec.radius >= params.diameter() {
        let note = if params.j < 2 {
            "ball floors need j > 1".to_string()
        } else {
            "the ball covers every list; only the average floor applies".to_string()
        };
        return Ok((None, note.clone(), json!({ "note": note })));
    }
    match theorem2_bound(params, spec.radius) {
        Ok(b) => Ok((
            Some(b.clone()),
            "closed form".into(),
            json!({ "value": b, "source": "closed-form" }),
        )),
        Err(Error::Hypothesis(msg)) => {
            let wc = worst_case_concentric(params, spec.radius)?;
            let note = format!("closed form not claimed ({msg}); exact concentric minimax used");
            Ok((
                Some(wc.value.clone()),
                note.clone(),
                json!({ "value": wc.value, "source": "minimax", "note": note }),
            ))
        }
        Err(e) => Err(e),
    }
}

fn cmd_tally(cli: &Cli, check_bounds: bool) -> Result<Output, Error> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("--input PATH is required".into()))?;
    let mut raw = RawBallotFile::read(path)?;
    let params = raw.params;
    if let Some(text) = cli.params.as_deref() {
        let declared = ElectionParams::parse(text)?;
        if declared != params {
            return Err(Error::InvalidParams(format!(
                "--params {declared} disagrees with the ballot file {params}"
            )));
        }
    }
    let spec = parse_ball(cli, &params)?;
    if cli.complete {
        let spec = spec
            .ok_or_else(|| Error::InvalidParams("--complete needs --center and --radius".into()))?;
        raw = complete_short_lists(&raw, &spec)?;
    }
    let dist = normalize(&raw)?;
    if let Some(s) = cli.threshold {
        if s > params.j {
            return Err(Error::InvalidParams(format!(
                "--threshold {s} exceeds j = {}",
                params.j
            )));
        }
    }
    if let Some(spec) = &spec {
        if !dist.is_supported_in(spec) {
            let outside = dist
                .support()
                .keys()
                .find(|l| !spec.contains(l))
                .expect("some list outside");
            return Err(Error::OutsideBall(format!(
                "list {outside} lies outside the ball of radius {} about {}",
                spec.radius, spec.center
            )));
        }
    }
    let result = best_committees(&dist, cli.threshold)?;
    let floor = theorem1_bound(&params);
    let d = cli.decimal;

    let mut human = format!(
        "parameters: n={} k={} j={}\nsupport: {} lists\n",
        params.n,
        params.k,
        params.j,
        dist.support_len()
    );
    if let Some(s) = cli.threshold {
        human.push_str(&format!("threshold: {s}\n"));
    }
    human.push_str(&format!(
        "best approval: {}\n",
        fmt_q(&result.best_value, d)
    ));
    human.push_str(&format!("winners ({}):", result.winners.len()));
    for w in &result.winners {
        human.push_str(&format!(" {w}"));
    }
    human.push('\n');
    human.push_str(&format!(
        "strategy: {} (predicted work {})\n",
        result.strategy_used, result.predicted_work
    ));
    human.push_str(&format!("floor (any distribution): {}\n", fmt_q(&floor, d)));

    let mut floors = vec![floor.clone()];
    let mut ball_json = Value::Null;
    if let Some(spec) = &spec {
        let (value, note, js) = ball_floor(&params, spec)?;
        match &value {
            Some(v) => human.push_str(&format!(
                "floor (ball about {} radius {}): {} [{note}]\n",
                spec.center,
                spec.radius,
                fmt_q(v, d)
            )),
            None => human.push_str(&format!("floor (ball): none [{note}]\n")),
        }
        floors.extend(value);
        ball_json = js;
    }
    let below = floors.iter().any(|f| result.best_value < *f);
    let code = if check_bounds && below {
        human.push_str("bound check: FAILED\n");
        EXIT_VERIFY_FAILED
    } else {
        if check_bounds {
            human.push_str("bound check: ok\n");
        }
        EXIT_OK
    };
    let structured = json!({
        "params": params,
        "threshold": cli.threshold,
        "result": result,
        "floor": floor,
        "ball_floor": ball_json,
        "bounds_ok": !below,
    });
    Ok(Output {
        human,
        structured,
        code,
    })
}

fn cmd_bounds(cli: &Cli) -> Result<Output, Error> {
    let params = required_params(cli)?;
    let alpha = parse_alpha(cli)?;
    let d = cli.decimal;
    let floor = theorem1_bound(&params);
    let mut human = format!("parameters: n={} k={} j={}\n", params.n, params.k, params.j);
    human.push_str(&format!("floor (any distribution): {}\n", fmt_q(&floor, d)));
    let mut structured = json!({ "params": params, "floor": floor });

    if alpha.is_some() && cli.radius.is_none() {
        return Err(Error::InvalidParams("--alpha needs --radius".into()));
    }
    if let Some(radius) = cli.radius {
        if radius > params.diameter() {
            return Err(Error::InvalidParams(format!(
                "radius {radius} exceeds the diameter {}",
                params.diameter()
            )));
        }
        let limit = ball_bound_radius_limit(&params);
        human.push_str(&format!(
            "radius limit j(1 - j/(k+1)): {}\n",
            fmt_q(&limit, d)
        ));
        structured["radius_limit"] = json!(limit);
        match theorem2_bound(&params, radius) {
            Ok(b) => {
                human.push_str(&format!("floor (ball radius {radius}): {}\n", fmt_q(&b, d)));
                structured["ball_floor"] = json!(b);
                if let Some(a) = &alpha {
                    let c = corollary1_bound(&params, radius, a)?;
                    human.push_str(&format!("floor (fraction {a} in ball): {}\n", fmt_q(&c, d)));
                    structured["alpha_floor"] = json!(c);
                }
            }
            Err(Error::Hypothesis(msg)) => {
                human.push_str(&format!("hypothesis not satisfied: {msg}\n"));
                structured["hypothesis_violation"] = json!(msg);
                if params.j >= 2 && radius < params.diameter() {
                    let wc = worst_case_concentric(&params, radius)?;
                    human.push_str(&format!(
                        "concentric minimax (radius {radius}): {} at weights {}\n",
                        fmt_q(&wc.value, d),
                        join(&wc.weights)
                    ));
                    structured["worst_case"] = json!(wc);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Output {
        human,
        structured,
        code: EXIT_OK,
    })
}

fn join(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(", "))
}

fn cmd_worst_case(cli: &Cli) -> Result<Output, Error> {
    let params = required_params(cli)?;
    let radius = cli
        .radius
        .ok_or_else(|| Error::InvalidParams("--radius is required".into()))?;
    let wc = worst_case_concentric(&params, radius).map_err(|e| match e {
        Error::Hypothesis(m) => Error::InvalidParams(m),
        other => other,
    })?;
    let d = cli.decimal;
    let mut human = format!(
        "parameters: n={} k={} j={} radius={radius}\nminimax value: {}\nring weights: {}\nachieving class: {}\n",
        params.n,
        params.k,
        params.j,
        fmt_q(&wc.value, d),
        join(&wc.weights),
        wc.achieving_class
    );
    let closed = theorem2_bound(&params, radius).ok();
    if let Some(b) = &closed {
        human.push_str(&format!("closed form: {}\n", fmt_q(b, d)));
    }
    let structured =
        json!({ "params": params, "radius": radius, "worst_case": wc, "closed_form": closed });
    Ok(Output {
        human,
        structured,
        code: EXIT_OK,
    })
}

fn cmd_verify(
    cli: &Cli,
    max_n: u32,
    samples: usize,
    summary: bool,
    corrupt: Option<&str>,
) -> Result<Output, Error> {
    if !(2..=16).contains(&max_n) {
        return Err(Error::InvalidParams(format!(
            "--max-n {max_n} outside 2..=16"
        )));
    }
    let corrupt_b = corrupt
        .map(|s| {
            let (r, m) = s.split_once(',').ok_or_else(|| {
                Error::InvalidParams(format!("--corrupt-b expects R,M, got {s:?}"))
            })?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidParams(format!("bad --corrupt-b {s:?}")))
            };
            Ok::<_, Error>((parse(r)?, parse(m)?))
        })
        .transpose()?;
    let config = VerifyConfig {
        max_n,
        seed: cli.seed.unwrap_or(0),
        samples,
        corrupt_b,
    };
    let reports = run_all(&config)?;
    let all_pass = reports.iter().all(|r| r.passed());
    let mut human = String::new();
    for r in &reports {
        if summary {
            human.push_str(&format!(
                "{}: {} checks, {} failed\n",
                r.name,
                r.len(),
                r.failures().count()
            ));
            for f in r.failures() {
                human.push_str(&format!("  [FAIL] {} {}\n", f.instance, f.detail));
            }
        } else {
            human.push_str(&r.to_string());
        }
    }
    human.push_str(if all_pass {
        "verification: all passed\n"
    } else {
        "verification: FAILED\n"
    });
    let structured =
        json!({ "passed": all_pass, "seed": config.seed, "max_n": max_n, "reports": reports });
    Ok(Output {
        human,
        structured,
        code: if all_pass {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        },
    })
}

fn cmd_generate(
    cli: &Cli,
    mode: GenerateMode,
    weights: Option<&str>,
    voters: u64,
) -> Result<Output, Error> {
    let params = required_params(cli)?;
    let center = parse_center(cli, &params)?.unwrap_or_else(|| CandidateSubset::first(params.j));
    let need_radius = || {
        cli.radius
            .ok_or_else(|| Error::InvalidParams("--radius is required for this mode".into()))
    };
    let raw = match mode {
        GenerateMode::UniformAll => uniform_all(&params)?.to_raw(),
        GenerateMode::UniformBall => {
            uniform_ball(&params, &BallSpec::new(center, need_radius()?, &params)?)?.to_raw()
        }
        GenerateMode::UniformRing => {
            let r = need_radius()?;
            if r > params.diameter() {
                return Err(Error::InvalidParams(format!(
                    "ring {r} exceeds the diameter {}",
                    params.diameter()
                )));
            }
            uniform_ring(&params, &center, r)?.to_raw()
        }
        GenerateMode::Concentric => {
            let text = weights.ok_or_else(|| {
                Error::InvalidParams("--weights is required for concentric".into())
            })?;
            let w = text
                .split(',')
                .map(|x| {
                    x.parse::<Rational>()
                        .map_err(|e| Error::InvalidParams(format!("--weights: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            concentric(&center, &w, &params)
                .map_err(|e| Error::InvalidParams(e.to_string()))?
                .to_raw()
        }
        GenerateMode::RandomBall => {
            let seed = cli.seed.ok_or_else(|| {
                Error::InvalidParams("--seed is required for random modes".into())
            })?;
            let spec = BallSpec::new(center, need_radius()?, &params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_ballots_on_ball(&mut rng, &params, &spec, voters)
                .map_err(|e| Error::InvalidParams(e.to_string()))?
        }
    };
    let text = raw.to_json();
    let structured: Value = serde_json::from_str(&text).expect("own output parses");
    Ok(Output {
        human: text,
        structured,
        code: EXIT_OK,
    })
}

fn cmd_oracle(cli: &Cli, grid: Option<u32>) -> Result<Output, Error> {
    if let Some(denominator) = grid {
        let params = required_params(cli)?;
        let radius = cli
            .radius
            .ok_or_else(|| Error::InvalidParams("--radius is required".into()))?;
        let value = brute_minimax_grid(&params, radius, denominator)?;
        let human = format!(
            "grid minimax (denominator {denominator}): {}\n",
            fmt_q(&value, cli.decimal)
        );
        return Ok(Output {
            human,
            structured: json!({ "params": params, "radius": radius, "denominator": denominator, "value": value }),
            code: EXIT_OK,
        });
    }
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("--input PATH is required".into()))?;
    let dist = normalize(&RawBallotFile::read(path)?)?;
    let s = cli.threshold.unwrap_or(dist.params().j);
    let result = brute_best(&dist, s)?;
    let mut human = format!(
        "brute best: {}\nwinners ({}):",
        fmt_q(&result.best_value, cli.decimal),
        result.winners.len()
    );
    for w in &result.winners {
        human.push_str(&format!(" {w}"));
    }
    human.push('\n');
    Ok(Output {
        human,
        structured: json!({ "result": result }),
        code: EXIT_OK,
    })
}
