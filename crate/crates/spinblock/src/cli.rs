//! Command-line front end. `run` parses arguments, enforces policy caps and
//! renders a report as JSON or as an aligned text table.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bar_partitions::{
    bar_core, bar_quotient, bar_weight, content, is_rouquier, rouquier_core, Multipartition, Partition,
};
use crate::dims::{divided_power_dim, dim_yd_closed, graded_dim, ungraded_dim};
use crate::error::SpinError;
use crate::fock::{apply_e, apply_f, form, FockVector};
use crate::laurent::LaurentPoly;
use crate::root_datum::{ell_of, explicit_cuspidal_words, is_cuspidal, word_content, RootVector, Word};
use crate::spin_blocks::{superblocks_in, TwistedGroup};
use crate::super_algebra::{build_a, build_b, hd_quotient_wreath_dim, Hd, HdElement, SuperAlgebra, Wreath};
use crate::tableaux::{enumerate_std, tableau_degree};

pub const MAX_PARTITION_SIZE: usize = 40;
pub const MAX_HEIGHT: usize = 10;
pub const MAX_BLOCK_N: usize = 7;
pub const MAX_D: usize = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

impl From<SpinError> for CliError {
    fn from(e: SpinError) -> Self {
        match e {
            SpinError::UnexpectedEigenvalue(_) | SpinError::NonDivisible(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "spinblock", version, about = "Spin block combinatorics, graded dimensions and finite algebra checks")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Ignore the policy caps on input sizes.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub p: usize,
    /// Comma separated parts, e.g. `16,11,10`; empty for the empty partition.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bar core of a p-strict partition.
    Core(PartitionArgs),
    /// Bar quotient of a p-strict partition.
    Quotient(PartitionArgs),
    /// Bar weight of a p-strict partition.
    Weight(PartitionArgs),
    /// Residue content of a p-strict partition.
    Content(PartitionArgs),
    /// The d-Rouquier core, or a check that `--check` is d-Rouquier.
    Rouquier {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        check: Option<String>,
    },
    /// Standard tableaux of a shape, optionally with a fixed residue word.
    Tableaux {
        #[arg(long)]
        p: usize,
        /// Components separated by `|`, e.g. `3,1|2`.
        #[arg(long)]
        shape: String,
        #[arg(long)]
        word: Option<String>,
    },
    /// Graded dimension of `e(i) R e(j)` in the cyclotomic quotient of level N.
    Dim {
        #[arg(long)]
        p: usize,
        #[arg(long = "N", default_value_t = 1)]
        level: usize,
        /// Content as comma separated coefficients of the simple roots.
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
        #[arg(long)]
        ungraded: bool,
    },
    /// Apply a sequence of operators `F<i>`/`E<i>` (rightmost first) to a basis vector.
    Fock {
        #[arg(long)]
        p: usize,
        #[arg(long = "N", default_value_t = 1)]
        level: usize,
        #[arg(long)]
        apply: String,
        /// Starting multipartition (components separated by `|`); the vacuum by default.
        #[arg(long)]
        start: Option<String>,
        /// Also report the form of the result with itself.
        #[arg(long)]
        form: bool,
    },
    /// Cuspidality of a word of content a multiple of delta.
    Cuspidal {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        word: String,
    },
    /// Dimension of the weight-d RoCK algebra `d! (2p-3)^d`.
    Ydim {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        d: usize,
    },
    /// Build one of the finite or affine superalgebras.
    Algebra {
        #[arg(long, value_enum)]
        build: AlgebraKind,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Superblocks of the twisted group algebra in characteristic p.
    Blocks {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// Include the support of each block idempotent.
        #[arg(long)]
        idempotents: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgebraKind {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "Hd")]
    Hd,
    #[value(name = "wreath")]
    Wreath,
}

pub struct Report {
    pub json: Value,
    pub table: String,
}

impl Report {
    fn new(json: Value, table: impl Into<String>) -> Self {
        Self { json, table: table.into() }
    }

    fn scalar(json: Value) -> Self {
        let table = match &json {
            Value::String(s) => s.clone(),
            v => v.to_string(),
        };
        Self { json, table }
    }
}

/// Result of one invocation: exit code and the text for stdout / stderr.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Json => serde_json::to_string(&report.json).expect("serializable") + "\n",
                Format::Table => report.table.trim_end().to_string() + "\n",
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn cap(value: usize, bound: usize, what: &str, force: bool) -> CliResult<()> {
    if value > bound && !force {
        return Err(CliError::Validation(format!("{what} = {value} exceeds the policy bound {bound} (use --force)")));
    }
    Ok(())
}

pub fn parse_partition(s: &str) -> CliResult<Partition> {
    let s = s.trim();
    if s.is_empty() || s == "-" || s == "0" {
        return Ok(Partition::empty());
    }
    let parts = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Validation(format!("malformed partition {s:?}"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Partition::new(parts)?)
}

pub fn parse_multipartition(s: &str) -> CliResult<Multipartition> {
    Ok(Multipartition::new(s.split('|').map(parse_partition).collect::<CliResult<Vec<_>>>()?))
}

fn parse_theta(s: &str, ell: usize) -> CliResult<RootVector> {
    let coeffs = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Validation(format!("malformed theta {s:?}"))))
        .collect::<CliResult<Vec<_>>>()?;
    if coeffs.len() != ell + 1 {
        return Err(SpinError::RankMismatch(coeffs.len(), ell + 1).into());
    }
    if coeffs.iter().any(|&c| c < 0) {
        return Err(SpinError::NegativeCoordinate.into());
    }
    Ok(RootVector::from_coeffs(&coeffs))
}

fn partition_json(l: &Partition) -> Value {
    json!(l.parts())
}

fn multi_json(m: &Multipartition) -> Value {
    json!(m.components.iter().map(|c| c.parts().to_vec()).collect::<Vec<_>>())
}

fn render_partition(l: &Partition) -> String {
    if l.is_empty() {
        "∅".into()
    } else {
        l.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn render_multi(m: &Multipartition) -> String {
    format!("({})", m.components.iter().map(render_partition).collect::<Vec<_>>().join(" | "))
}

fn poly_json(f: &LaurentPoly) -> Value {
    serde_json::to_value(f).expect("serializable")
}

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s}{}", " ".repeat(widths[c] - s.chars().count())))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    let force = cli.force;
    match &cli.command {
        Command::Core(a) | Command::Quotient(a) | Command::Weight(a) | Command::Content(a) => {
            // linear-time abacus operations, so no size cap here
            let lam = parse_partition(&a.lambda)?;
            ell_of(a.p)?;
            lam.require_p_strict(a.p)?;
            Ok(match &cli.command {
                Command::Core(_) => {
                    let c = bar_core(&lam, a.p)?;
                    Report::new(partition_json(&c), render_partition(&c))
                }
                Command::Quotient(_) => {
                    let q = bar_quotient(&lam, a.p)?;
                    Report::new(multi_json(&q), render_multi(&q))
                }
                Command::Weight(_) => Report::scalar(json!(bar_weight(&lam, a.p)?)),
                _ => {
                    let c = content(&lam, a.p)?;
                    let coeffs = c.coeffs().expect("integral");
                    let rows: Vec<Vec<String>> = std::iter::once(vec!["i".to_string(), "count".to_string()])
                        .chain(coeffs.iter().enumerate().map(|(i, x)| vec![i.to_string(), x.to_string()]))
                        .collect();
                    Report::new(json!(coeffs), align(&rows))
                }
            })
        }
        Command::Rouquier { p, d, check } => {
            cap(*d, MAX_D, "d", force)?;
            match check {
                Some(rho) => {
                    let rho = parse_partition(rho)?;
                    cap(rho.size(), MAX_PARTITION_SIZE, "|rho|", force)?;
                    let ok = is_rouquier(&rho, *p, *d)?;
                    let text = format!("{} is {}{}-Rouquier", render_partition(&rho), if ok { "" } else { "not " }, d);
                    Ok(Report::new(json!({"core": rho.parts(), "d": d, "rouquier": ok}), text))
                }
                None => {
                    let rho = rouquier_core(*p, *d)?;
                    Ok(Report::new(partition_json(&rho), render_partition(&rho)))
                }
            }
        }
        Command::Tableaux { p, shape, word } => {
            let m = parse_multipartition(shape)?;
            cap(m.size(), MAX_PARTITION_SIZE, "|shape|", force)?;
            let ell = ell_of(*p)?;
            if !m.is_p_strict(*p) {
                return Err(CliError::Validation(format!("shape {} is not {p}-strict", render_multi(&m))));
            }
            let w = word.as_deref().map(Word::parse).transpose()?;
            if let Some(w) = &w {
                w.validate(ell)?;
            }
            let w = w.map(|w| w.expand());
            let mut rows = vec![vec!["word".to_string(), "degree".to_string(), "filling".to_string()]];
            let mut items = Vec::new();
            for t in enumerate_std(&m, *p, w.as_ref()) {
                let deg = tableau_degree(&t, *p)?;
                let word = crate::tableaux::word_of(&t, *p);
                let fill: Vec<Value> = t.filling.iter().map(|n| json!([n.row, n.col, n.comp])).collect();
                rows.push(vec![
                    word.render(ell),
                    deg.to_string(),
                    t.filling.iter().map(|n| format!("({},{},{})", n.row, n.col, n.comp)).collect::<Vec<_>>().join(""),
                ]);
                items.push(json!({"word": word.letters, "degree": poly_json(&deg), "filling": fill}));
            }
            Ok(Report::new(json!({"shape": multi_json(&m), "tableaux": items}), align(&rows)))
        }
        Command::Dim { p, level, theta, i, j, ungraded } => {
            let ell = ell_of(*p)?;
            let (wi, wj) = (Word::parse(i)?, Word::parse(j)?);
            wi.validate(ell)?;
            wj.validate(ell)?;
            let theta = match theta {
                Some(t) => parse_theta(t, ell)?,
                None => word_content(&wi, ell)?,
            };
            let ht: i64 = theta.coeffs().expect("integral").iter().sum();
            cap(ht as usize, MAX_HEIGHT, "ht(theta)", force)?;
            if *level == 0 {
                return Err(CliError::Validation("N must be at least 1".into()));
            }
            if *ungraded {
                let d = ungraded_dim(*level, &theta, &wi.expand(), &wj.expand(), *p)?;
                return Ok(Report::scalar(json!(d)));
            }
            let dim = if wi.divided.is_some() || wj.divided.is_some() {
                divided_power_dim(*level, &theta, &wi, &wj, *p)?
            } else {
                graded_dim(*level, &theta, &wi, &wj, *p)?.dim
            };
            Ok(Report::new(poly_json(&dim), dim.to_string()))
        }
        Command::Fock { p, level, apply, start, form: want_form } => {
            let ell = ell_of(*p)?;
            let mut v = match start {
                Some(s) => {
                    let m = parse_multipartition(s)?;
                    if m.level() != *level {
                        return Err(SpinError::LevelMismatch(m.level(), *level).into());
                    }
                    cap(m.size(), MAX_PARTITION_SIZE, "|start|", force)?;
                    if !m.is_p_strict(*p) {
                        return Err(CliError::Validation(format!("{} is not {p}-strict", render_multi(&m))));
                    }
                    FockVector::basis(*p, m)
                }
                None => FockVector::vacuum(*p, *level),
            };
            let ops: Vec<(char, usize)> = apply
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let (kind, idx) = t.split_at(1);
                    let kind = kind.chars().next().expect("nonempty").to_ascii_uppercase();
                    let i: usize = idx.parse().map_err(|_| CliError::Validation(format!("malformed operator {t:?}")))?;
                    if !matches!(kind, 'E' | 'F') || i > ell {
                        return Err(CliError::Validation(format!("unknown operator {t:?}")));
                    }
                    Ok((kind, i))
                })
                .collect::<CliResult<_>>()?;
            cap(ops.len(), MAX_HEIGHT, "number of operators", force)?;
            for &(kind, i) in ops.iter().rev() {
                v = if kind == 'F' { apply_f(i, &v)? } else { apply_e(i, &v)? };
            }
            let mut rows = vec![vec!["multipartition".to_string(), "coefficient".to_string()]];
            for (m, c) in v.terms() {
                rows.push(vec![render_multi(m), c.to_string()]);
            }
            let mut out = json!({"p": p, "level": level, "vector": v.to_json()});
            let mut table = align(&rows);
            if *want_form {
                let f = form(&v, &v)?;
                out["form"] = poly_json(&f);
                table.push_str(&format!("form: {f}\n"));
            }
            Ok(Report::new(out, table))
        }
        Command::Cuspidal { p, word } => {
            let ell = ell_of(*p)?;
            let w = Word::parse(word)?;
            w.validate(ell)?;
            cap(w.expand().len(), MAX_HEIGHT * 2, "word length", force)?;
            let cusp = is_cuspidal(&w, ell)?;
            let expanded = w.expand().letters;
            let delta_len: usize = (RootVector::delta(ell).coeffs().expect("integral")).iter().sum::<i64>() as usize;
            let mut out = json!({"word": expanded, "cuspidal": cusp});
            let mut table = format!("cuspidal: {cusp}");
            if expanded.len() == delta_len {
                let explicit = explicit_cuspidal_words(ell).contains(&expanded);
                out["explicit_shuffle_form"] = json!(explicit);
                table.push_str(&format!("\nexplicit shuffle form: {explicit}"));
            }
            Ok(Report::new(out, table))
        }
        Command::Ydim { p, d } => {
            cap(*d, MAX_D, "d", force)?;
            Ok(Report::scalar(json!(dim_yd_closed(*p, *d)?)))
        }
        Command::Algebra { build, l, d } => {
            cap(*d, MAX_D, "d", force)?;
            cap(*l, MAX_HEIGHT, "l", force)?;
            algebra_report(*build, *l, *d)
        }
        Command::Blocks { n, p, idempotents } => {
            cap(*n, MAX_BLOCK_N, "n", force)?;
            ell_of(*p)?;
            let g = TwistedGroup::new(*n);
            let blocks = superblocks_in(&g, *p)?;
            let mut rows = vec![vec!["theta".to_string(), "dimension".to_string(), "weight words".to_string()]];
            let mut items = Vec::new();
            for b in &blocks {
                let theta = b.theta.coeffs().expect("integral");
                rows.push(vec![
                    theta.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                    b.dimension.to_string(),
                    b.num_weight_words.to_string(),
                ]);
                let mut item = json!({"theta": theta, "dimension": b.dimension as u64, "num_weight_words": b.num_weight_words});
                if *idempotents {
                    item["idempotent"] = json!(b.idempotent_terms(&g));
                }
                items.push(item);
            }
            Ok(Report::new(json!(items), align(&rows)))
        }
    }
}

fn algebra_report(kind: AlgebraKind, l: usize, d: usize) -> CliResult<Report> {
    Ok(match kind {
        AlgebraKind::A | AlgebraKind::B => {
            let alg = if kind == AlgebraKind::A { build_a(l)? } else { build_b(l)?.algebra };
            let mut rows = vec![vec!["basis".to_string(), "degree".to_string(), "parity".to_string()]];
            for i in 0..alg.dim() {
                let (deg, par) = alg.bidegree(i);
                rows.push(vec![alg.label(i), deg.to_string(), par.to_string()]);
            }
            Report::new(alg.to_json(), align(&rows))
        }
        AlgebraKind::Wreath => {
            let a = build_a(l)?;
            let w = Wreath::new(&a, d);
            let graded: Vec<(i32, usize)> = w.graded_dim().into_iter().collect();
            let mut rows = vec![vec!["degree".to_string(), "dimension".to_string()]];
            rows.extend(graded.iter().map(|(e, c)| vec![e.to_string(), c.to_string()]));
            Report::new(json!({"l": l, "d": d, "dimension": w.dim(), "graded_dimension": graded}), align(&rows))
        }
        AlgebraKind::Hd => {
            let h = Hd::new(l, d)?;
            let mut rels = Vec::new();
            let mut rows = vec![vec!["relation".to_string(), "correction".to_string()]];
            for r in 0..d.saturating_sub(1) {
                for t in 0..d {
                    let mut x = HdElement::zero();
                    for (b, c) in h.szid_correction(r, t) {
                        x.add(&h.tensor_elem(&b), c);
                    }
                    let terms: Vec<(String, i64)> = x.terms.iter().map(|(m, &c)| (h.label(m), c)).collect();
                    let text = if terms.is_empty() {
                        "0".to_string()
                    } else {
                        terms.iter().map(|(m, c)| format!("{c}*{m}")).collect::<Vec<_>>().join(" + ")
                    };
                    rows.push(vec![format!("s{} z{} - z{} s{}", r + 1, t + 1, if t == r { r + 2 } else if t == r + 1 { r + 1 } else { t + 1 }, r + 1), text]);
                    rels.push(json!({"r": r + 1, "t": t + 1, "correction": terms}));
                }
            }
            let qd = hd_quotient_wreath_dim(l, d)?;
            rows.push(vec!["z-free quotient dimension".to_string(), qd.to_string()]);
            Report::new(json!({"l": l, "d": d, "quotient_dimension": qd as u64, "commutation": rels}), align(&rows))
        }
    })
}
