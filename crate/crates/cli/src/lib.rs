//! Argument parsing and dispatch for the `rubin` binary. Every command calls
//! one library operation and formats its result.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rubin_core::game::{
    audit_transcript, run_game, AuditReport, BStrategy, GameConfig, Transcript,
};
use rubin_core::parse::{parse_group_spec, parse_perm, parse_word, ParsedGroup};
use rubin_core::symbolic::{
    build_lemma31, build_lemma32, lemma32_ball_check, lemma33_bounded_search_with_budget,
    lemma34_control, verify_lemma34, ConstructionReport,
};
use rubin_core::{
    centralizer_of_set, compute_s, is_algebraically_disjoint, product_disjointness_check,
    DisjointnessMatrix, FiniteGroup, GroupExpr, Perm, PosetOptions, RubinPoset, SymWord,
};

/// Exit statuses.
pub const OK: i32 = 0;
pub const FALSE: i32 = 1;
pub const USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rubin",
    version,
    about = "Algebraic disjointness, Rubin posets, amalgam word problems and forcing games",
    after_help = "Permutations use 0-based cycle notation, e.g. \"(0 1)(2 3)\".\n\
                  --config FILE reads flat key=value lines; flags given on the command line win."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Is g algebraically disjoint from f?
    Disjoint {
        #[arg(long)]
        group: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        json: bool,
    },
    /// S_f and its centralizer.
    Sf {
        #[arg(long)]
        group: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 12)]
        power: u32,
        #[arg(long)]
        json: bool,
    },
    /// Full disjointness matrix, rows g and columns f.
    Matrix {
        #[arg(long)]
        group: String,
        #[arg(long)]
        json: bool,
    },
    /// Poset of finite intersections of the C_G(S_f).
    Poset {
        #[arg(long)]
        group: String,
        /// Write the Hasse diagram in DOT form to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Include G itself as the empty intersection.
        #[arg(long)]
        whole_group: bool,
        #[arg(long)]
        json: bool,
    },
    /// Mutual disjointness of (x,1) and (1,y) in a direct product.
    ProductCheck {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        json: bool,
    },
    /// Overgroup with a, b centralising g and 1 != [a,[b,h]] centralising g.
    Lemma31 {
        #[arg(long)]
        group: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        json: bool,
    },
    /// Overgroup with a centralising g and 1 != [a,gamma] centralising g.
    Lemma32 {
        #[arg(long)]
        group: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        gamma: String,
        /// Also check injectivity of F(g, gamma) on the ball of this radius.
        #[arg(long)]
        ball: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// [g, h_2^-1 h_1] = 1 in the amalgam of two copies of BS(1, m).
    Lemma34 {
        #[arg(long, default_value_t = 2)]
        m: i64,
        /// Also evaluate [h_1, h_2^-1 h_1] over free factors.
        #[arg(long)]
        control: bool,
        #[arg(long)]
        json: bool,
    },
    /// Bounded search for powers of h_2^-1 h_1 in the normal closure of g.
    Lemma33Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        /// Stop after this many candidate products.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Play the game and report the transcript and witness.
    GameRun {
        #[command(flatten)]
        game: GameArgs,
        /// Print the audit and fail if it does not pass.
        #[arg(long)]
        audit: bool,
        /// Write the transcript JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Replay and check a transcript file.
    GameAudit {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct GameArgs {
    #[arg(long, default_value_t = 10)]
    rounds: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// passive, conjugacy or random.
    #[arg(long, default_value = "passive")]
    b_strategy: BStrategy,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=1))]
    identity_name: u32,
    #[arg(long, default_value_t = 16)]
    max_rule_len: usize,
    #[arg(long, default_value_t = 600)]
    max_rules: usize,
    #[arg(long, default_value_t = 20)]
    retry_budget: u32,
}

impl GameArgs {
    fn config(&self) -> GameConfig {
        GameConfig {
            rounds: self.rounds,
            seed: self.seed,
            identity: self.identity_name,
            strategy: self.b_strategy,
            max_rule_len: self.max_rule_len,
            max_rules: self.max_rules,
            retry_budget: self.retry_budget,
        }
    }
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

type Res = Result<(String, i32), String>;

/// Runs the command line (including the program name) to completion.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => return usage(format!("error: {e}\n")),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let text = e.render().to_string();
            return if code == OK {
                Output {
                    stdout: text,
                    ..Output::default()
                }
            } else {
                usage(text)
            };
        }
    };
    let mut stderr = String::new();
    match dispatch(cli.cmd, &mut stderr) {
        Ok((stdout, code)) => Output {
            stdout,
            stderr,
            code,
        },
        Err(e) => Output {
            stdout: String::new(),
            stderr: format!("{stderr}error: {e}\n"),
            code: USAGE,
        },
    }
}

fn usage(stderr: String) -> Output {
    Output {
        stdout: String::new(),
        stderr,
        code: USAGE,
    }
}

/// Replaces `--config FILE` by the file's `key = value` lines as flags,
/// skipping keys already given on the command line.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut out = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            path = Some(it.next().ok_or("--config needs a file")?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            out.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(out);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read {}: {e}", path.to_string_lossy()))?;
    let given: BTreeSet<String> = out
        .iter()
        .filter_map(|a| {
            let s = a.to_string_lossy();
            s.strip_prefix("--")
                .map(|f| f.split('=').next().unwrap_or(f).to_string())
        })
        .collect();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
        let key = k.trim().replace('_', "-");
        let v = v.trim();
        if given.contains(&key) {
            continue;
        }
        match v {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

fn finite(spec: &str) -> Result<FiniteGroup, String> {
    match parse_group_spec(spec).map_err(|e| format!("{e}\n  hint: {}", e.hint))? {
        ParsedGroup::Finite(g) => Ok(g),
        ParsedGroup::Symbolic(_) => Err(format!("{spec:?} is not a finite group")),
    }
}

fn symbolic(spec: &str) -> Result<GroupExpr, String> {
    match parse_group_spec(spec).map_err(|e| format!("{e}\n  hint: {}", e.hint))? {
        ParsedGroup::Symbolic(e) => Ok(e),
        ParsedGroup::Finite(_) => Err(format!("{spec:?} is not a group expression")),
    }
}

fn perm(g: &FiniteGroup, text: &str) -> Result<Perm, String> {
    let p = parse_perm(text, g.degree()).map_err(|e| e.to_string())?;
    if !g.contains(&p) {
        return Err(format!("{p} is not in the group"));
    }
    Ok(p)
}

fn word(text: &str) -> Result<SymWord, String> {
    parse_word(text).map_err(|e| e.to_string())
}

fn set_string(g: &FiniteGroup, els: impl IntoIterator<Item = usize>) -> String {
    let v: Vec<String> = els.into_iter().map(|i| g.element(i).to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn verdict(ok: bool) -> i32 {
    if ok {
        OK
    } else {
        FALSE
    }
}

fn report_text(r: &ConstructionReport) -> String {
    let mut s = format!("{} ({} case)\n", r.construction, r.case);
    for (label, e) in &r.groups {
        let _ = writeln!(s, "  {label} = {e}");
    }
    for (name, w) in &r.elements {
        let _ = writeln!(s, "  {name} = {w}");
    }
    for c in &r.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "  {mark} in {}: {}", c.group, c.description);
    }
    for n in &r.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    s
}

fn audit_text(a: &AuditReport) -> String {
    let mut s = format!(
        "audit {} ({} moves, {} witness pairs verified)\n",
        if a.passed { "passed" } else { "FAILED" },
        a.moves_checked,
        a.quadruples_verified
    );
    for c in &a.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        let _ = writeln!(s, "  {mark} {}: {}", c.name, c.detail);
    }
    s
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serialises") + "\n"
}

fn dispatch(cmd: Cmd, stderr: &mut String) -> Res {
    match cmd {
        Cmd::Disjoint {
            group,
            g,
            f,
            json: j,
        } => {
            let grp = finite(&group)?;
            let (gp, fp) = (perm(&grp, &g)?, perm(&grp, &f)?);
            let d = is_algebraically_disjoint(&grp, &gp, &fp).map_err(|e| e.to_string())?;
            let out = if j {
                json(
                    &serde_json::json!({ "g": gp.to_string(), "f": fp.to_string(), "disjoint": d }),
                )
            } else {
                format!("{d}\n")
            };
            Ok((out, verdict(d)))
        }
        Cmd::Sf {
            group,
            f,
            power,
            json: j,
        } => {
            let grp = finite(&group)?;
            let fp = perm(&grp, &f)?;
            let s = if power == 12 {
                compute_s(&grp, &fp)
            } else {
                rubin_core::disjoint::compute_s_with_power(&grp, &fp, power)
            }
            .map_err(|e| e.to_string())?;
            let sp: Vec<Perm> = s.iter().map(|&i| grp.element(i).clone()).collect();
            let c = centralizer_of_set(&grp, &sp).map_err(|e| e.to_string())?;
            let out = if j {
                let names = |v: &[Perm]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
                let cp: Vec<Perm> = c.iter().map(|&i| grp.element(i).clone()).collect();
                json(&serde_json::json!({
                    "f": fp.to_string(),
                    "power": power,
                    "s_f": names(&sp),
                    "centralizer": names(&cp),
                }))
            } else {
                format!(
                    "S_f = {}\nC_G(S_f) = {} (order {})\n",
                    set_string(&grp, s.iter().copied()),
                    set_string(&grp, c.iter().copied()),
                    c.len()
                )
            };
            Ok((out, OK))
        }
        Cmd::Matrix { group, json: j } => {
            let grp = finite(&group)?;
            let m = DisjointnessMatrix::compute(&grp);
            if j {
                return Ok((m.to_json() + "\n", OK));
            }
            let mut s = String::new();
            for (i, p) in m.elements.iter().enumerate() {
                let _ = writeln!(s, "{i:>4}  {p}");
            }
            s.push('\n');
            for row in &m.matrix {
                let line: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
                let _ = writeln!(s, "{line}");
            }
            Ok((s, OK))
        }
        Cmd::Poset {
            group,
            dot,
            whole_group,
            json: j,
        } => {
            let grp = finite(&group)?;
            let opts = PosetOptions {
                include_whole_group: whole_group,
                ..PosetOptions::default()
            };
            let p = RubinPoset::compute(&grp, opts).map_err(|e| e.to_string())?;
            if let Some(path) = dot {
                std::fs::write(&path, p.to_dot(&grp))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            if j {
                return Ok((p.to_json() + "\n", OK));
            }
            let mut s = format!("{} nodes, {} covers\n", p.nodes.len(), p.hasse.len());
            for (i, n) in p.nodes.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "  n{i}: order {}, f = ({})",
                    n.elements.len(),
                    n.witness
                        .iter()
                        .map(|&f| grp.element(f).to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            for (a, b) in &p.hasse {
                let _ = writeln!(s, "  n{a} < n{b}");
            }
            Ok((s, OK))
        }
        Cmd::ProductCheck {
            left,
            right,
            json: j,
        } => {
            let (l, r) = (finite(&left)?, finite(&right)?);
            let rep = product_disjointness_check(&l, &r).map_err(|e| e.to_string())?;
            let out = if j {
                json(&rep)
            } else {
                let mut s = format!(
                    "{} cross pairs checked: {}\n",
                    rep.pairs_checked,
                    if rep.holds() {
                        "all mutually disjoint"
                    } else {
                        "counterexamples found"
                    }
                );
                for (x, y) in &rep.counterexamples {
                    let _ = writeln!(s, "  ({x}, 1) and (1, {y})");
                }
                for n in &rep.notes {
                    let _ = writeln!(s, "  note: {n}");
                }
                s
            };
            Ok((out, verdict(rep.holds())))
        }
        Cmd::Lemma31 {
            group,
            g,
            h,
            json: j,
        } => {
            let e = symbolic(&group)?;
            let r = build_lemma31(&e, &word(&g)?, &word(&h)?).map_err(|e| e.to_string())?;
            let out = if j {
                r.to_json() + "\n"
            } else {
                report_text(&r)
            };
            Ok((out, verdict(r.all_passed())))
        }
        Cmd::Lemma32 {
            group,
            g,
            gamma,
            ball,
            json: j,
        } => {
            let e = symbolic(&group)?;
            let l = build_lemma32(&e, &word(&g)?, &word(&gamma)?).map_err(|e| e.to_string())?;
            let mut ok = l.report.all_passed();
            let ball = match ball {
                Some(r) => Some(lemma32_ball_check(r).map_err(|e| e.to_string())?),
                None => None,
            };
            if let Some(b) = &ball {
                ok &= b.kernel_elements.is_empty();
            }
            let out = if j {
                json(&serde_json::json!({ "report": l.report, "ball": ball }))
            } else {
                let mut s = report_text(&l.report);
                if let Some(b) = &ball {
                    let _ = writeln!(
                        s,
                        "ball of radius {}: {} words, {} in the kernel ({} with non-zero gamma exponent)",
                        b.radius,
                        b.words_checked,
                        b.kernel_elements.len(),
                        b.kernel_with_gamma_exponent
                    );
                }
                s
            };
            Ok((out, verdict(ok)))
        }
        Cmd::Lemma34 {
            m,
            control,
            json: j,
        } => {
            let v = verify_lemma34(m).map_err(|e| e.to_string())?;
            let c = if control {
                Some(!lemma34_control().map_err(|e| e.to_string())?)
            } else {
                None
            };
            let ok = v && c.unwrap_or(true);
            let out = if j {
                json(&serde_json::json!({ "m": m, "verified": v, "control_nontrivial": c }))
            } else {
                let mut s = format!("{}\n", if v { "verified" } else { "not verified" });
                if let Some(c) = c {
                    let _ = writeln!(
                        s,
                        "control over free factors: {}",
                        if c { "non-trivial" } else { "trivial" }
                    );
                }
                s
            };
            Ok((out, verdict(ok)))
        }
        Cmd::Lemma33Search {
            n,
            l,
            m,
            budget,
            json: j,
        } => {
            let _ = writeln!(stderr, "searching N={n} L={l} M={m}");
            let r =
                lemma33_bounded_search_with_budget(n, l, m, budget).map_err(|e| e.to_string())?;
            let _ = writeln!(
                stderr,
                "examined {} products in {} ms",
                r.candidates_examined, r.elapsed_ms
            );
            let out = if j {
                r.to_json() + "\n"
            } else {
                let mut s = format!(
                    "{} conjugates, {} products examined, {}\n",
                    r.conjugates,
                    r.candidates_examined,
                    if r.refuted() {
                        "counterexamples found"
                    } else {
                        "no counterexample"
                    }
                );
                for c in r.counterexamples.iter().chain(&r.larger_powers) {
                    let _ = writeln!(s, "  {} = gamma^{}", c.product, c.exponent);
                }
                if let Some(note) = &r.budget_note {
                    let _ = writeln!(s, "  note: {note}");
                }
                s
            };
            Ok((out, verdict(!r.refuted())))
        }
        Cmd::GameRun {
            game,
            audit,
            out,
            json: j,
        } => {
            let rep = run_game(game.config()).map_err(|e| e.to_string())?;
            if let Some(path) = out {
                std::fs::write(&path, rep.transcript.to_json())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            let code = if audit { verdict(rep.audit.passed) } else { OK };
            if j {
                return Ok((rep.to_json() + "\n", code));
            }
            let mut s = format!(
                "{} moves; cases {:?}; {} B moves rejected\nwitness: {}\n",
                rep.transcript.moves.len(),
                rep.case_counts,
                rep.rejected_b_moves,
                rep.witness.group
            );
            for (n, w) in &rep.witness.assignment {
                let _ = writeln!(s, "  x{n} = {w}");
            }
            if audit {
                s.push_str(&audit_text(&rep.audit));
            }
            Ok((s, code))
        }
        Cmd::GameAudit {
            transcript,
            json: j,
        } => {
            let text = std::fs::read_to_string(&transcript)
                .map_err(|e| format!("cannot read {}: {e}", transcript.display()))?;
            let t = Transcript::from_json(&text).map_err(|e| format!("bad transcript: {e}"))?;
            let a = audit_transcript(&t);
            let out = if j {
                a.to_json() + "\n"
            } else {
                audit_text(&a)
            };
            Ok((out, verdict(a.passed)))
        }
    }
}
