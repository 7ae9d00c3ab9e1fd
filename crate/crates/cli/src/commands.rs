//! The subcommands, independent of argument parsing.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ols_core::latin::orthogonality_partial;
use ols_core::product::DENSE_THRESHOLD;
use ols_core::{embed_pair, embed_pair_basic, Embedding, PartialLatinSquare};
use serde_json::{json, Value};

use crate::formats::{emit_row, parse_grid, Manifest, PairDocument};
use crate::verify::{verify, Squares, Verdict, Which};
use crate::{exit, CliError, CliResult};

/// What a successful command prints: a text summary and the same content
/// for the JSON envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub details: Value,
}

pub enum PairSource {
    Json(PathBuf),
    Grids { p: PathBuf, q: PathBuf },
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn with_path(path: &Path, e: CliError) -> CliError {
    CliError::new(e.code, format!("{}: {}", path.display(), e.message))
}

pub fn load_pair(src: &PairSource) -> CliResult<(PartialLatinSquare, PartialLatinSquare)> {
    match src {
        PairSource::Json(path) => {
            let doc = PairDocument::parse(&read(path)?).map_err(|e| with_path(path, e))?;
            doc.squares().map_err(|e| with_path(path, e))
        }
        PairSource::Grids { p, q } => {
            let load = |path: &Path| -> CliResult<PartialLatinSquare> {
                parse_grid(&read(path)?).map_err(|e| with_path(path, e.into()))
            };
            Ok((load(p)?, load(q)?))
        }
    }
}

pub fn verify_pair(src: &PairSource) -> CliResult<Outcome> {
    let (p, q) = load_pair(src)?;
    let report = orthogonality_partial(&p, &q)
        .map_err(|e| CliError::new(exit::NOT_ORTHOGONAL_PAIR, e.to_string()))?;
    if !report.is_ok() {
        return Err(CliError::new(
            exit::NOT_ORTHOGONAL_PAIR,
            format!("not orthogonal: {report}"),
        ));
    }
    Ok(Outcome {
        text: format!("orthogonal: order {}, volume {}\n", p.order(), p.volume()),
        details: json!({ "order": p.order(), "volume": p.volume(), "orthogonal": true }),
    })
}

#[derive(Debug, Clone, Default)]
pub struct EmbedOptions {
    pub basic: bool,
    pub lazy: bool,
    pub out_a: Option<PathBuf>,
    pub out_b: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub dump_trades: Option<PathBuf>,
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

/// Streams one square of `e` to `path` as a dense grid.
pub fn write_square(e: &Embedding, first: bool, path: &Path) -> CliResult<()> {
    let mut w = create(path)?;
    let mut row = Vec::with_capacity(e.order());
    let mut line = String::new();
    for r in 0..e.order() as u32 {
        e.fill_row(r, first, &mut row);
        line.clear();
        emit_row(&row, &mut line);
        w.write_all(line.as_bytes())
            .map_err(|err| CliError::io(path, err))?;
    }
    w.flush().map_err(|err| CliError::io(path, err))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn build_embedding(src: &PairSource, basic: bool) -> CliResult<Embedding> {
    let (p, q) = load_pair(src)?;
    let report = orthogonality_partial(&p, &q)
        .map_err(|e| CliError::new(exit::NOT_ORTHOGONAL_PAIR, e.to_string()))?;
    if !report.is_ok() {
        return Err(CliError::new(
            exit::NOT_ORTHOGONAL_PAIR,
            format!("not orthogonal: {report}"),
        ));
    }
    let result = if basic {
        embed_pair_basic(&p, &q, None)
    } else {
        embed_pair(&p, &q)
    };
    result.map_err(|e| CliError::general(e.to_string()))
}

pub fn embed(src: &PairSource, opts: &EmbedOptions) -> CliResult<Outcome> {
    let e = build_embedding(src, opts.basic)?;
    let order = e.order();
    let dense_requested = opts.out_a.is_some() || opts.out_b.is_some();
    if opts.lazy && dense_requested {
        return Err(CliError::general(
            "--lazy writes no dense grids; drop --out-a/--out-b",
        ));
    }
    if order > DENSE_THRESHOLD && !opts.lazy {
        return Err(CliError::general(format!(
            "order {order} exceeds the dense threshold {DENSE_THRESHOLD}; rerun with --lazy --manifest FILE"
        )));
    }
    let mut written = Vec::new();
    if let Some(path) = &opts.out_a {
        write_square(&e, true, path)?;
        written.push(path.display().to_string());
    }
    if let Some(path) = &opts.out_b {
        write_square(&e, false, path)?;
        written.push(path.display().to_string());
    }
    if let Some(path) = &opts.manifest {
        write_text(path, &Manifest::from_embedding(&e).to_json())?;
        written.push(path.display().to_string());
    }
    if let Some(path) = &opts.dump_trades {
        let records = e.trade_records();
        let mut text = serde_json::to_string_pretty(&records).expect("trade records serialize");
        text.push('\n');
        write_text(path, &text)?;
        written.push(path.display().to_string());
    }
    let report = e.report();
    let mut text = report.to_key_value();
    for w in &written {
        text.push_str(&format!("wrote={w}\n"));
    }
    Ok(Outcome {
        text,
        details: json!({ "report": report, "written": written }),
    })
}

pub enum EmbeddingSource {
    Files { a: PathBuf, b: PathBuf },
    Manifest(PathBuf),
}

pub fn load_manifest(path: &Path) -> CliResult<Embedding> {
    Manifest::parse(&read(path)?)
        .and_then(|m| m.embedding())
        .map_err(|e| with_path(path, e))
}

pub fn verify_embedding(pair: &PairSource, squares: &EmbeddingSource) -> CliResult<Outcome> {
    let (p, q) = load_pair(pair)?;
    let squares = match squares {
        EmbeddingSource::Files { a, b } => Squares::Files {
            a: a.clone(),
            b: b.clone(),
        },
        EmbeddingSource::Manifest(path) => Squares::Lazy(Box::new(load_manifest(path)?)),
    };
    match verify(&squares, &p, &q)? {
        Verdict::Ok { order } => Ok(Outcome {
            text: format!("{}\n", Verdict::Ok { order }),
            details: json!({ "order": order, "latin": true, "orthogonal": true, "contains": true }),
        }),
        v => Err(CliError::new(v.exit_code(), v.to_string())),
    }
}

pub fn cell(manifest: &Path, row: u32, col: u32, which: Which) -> CliResult<Outcome> {
    let e = load_manifest(manifest)?;
    let t = e.order();
    if row as usize >= t || col as usize >= t {
        return Err(CliError::general(format!(
            "cell ({row}, {col}) outside order {t}"
        )));
    }
    let symbol = match which {
        Which::A => e.a_at(row, col),
        Which::B => e.b_at(row, col),
    };
    Ok(Outcome {
        text: format!("{symbol}\n"),
        details: json!({ "row": row, "col": col, "square": which.to_string(), "symbol": symbol }),
    })
}
