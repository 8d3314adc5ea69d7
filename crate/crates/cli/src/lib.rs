//! Pipeline orchestration behind the `slicekit` binary.
//!
//! Exit codes: 0 success (including an empty slice with a warning),
//! 1 lex/parse errors, 2 unknown stream variable, 3 I/O failure or a
//! missing corpus golden. Diagnostics go to stderr, payloads to stdout.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use slicekit_core::{
    build_graph_with, compute_slice_with, parse_method, to_dot, to_json, DataflowMode, Error,
    MethodAst, SliceCriterion, SliceDoc,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FRONTEND: i32 = 1;
pub const EXIT_UNKNOWN_VARIABLE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Dot,
}

/// One resolved invocation of the tool.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input_path: PathBuf,
    /// Reserved for a future multi-method container format.
    pub method_name: Option<String>,
    /// Required when slicing; unused when only the graph is emitted.
    pub stream_variable: Option<String>,
    pub sink_methods: BTreeSet<String>,
    pub mode: DataflowMode,
    pub output_format: OutputFormat,
    /// Emit the dependency graph instead of a slice.
    pub emit_graph: bool,
}

impl RunConfig {
    pub fn slice(input_path: impl Into<PathBuf>, stream_variable: impl Into<String>) -> Self {
        RunConfig {
            input_path: input_path.into(),
            method_name: None,
            stream_variable: Some(stream_variable.into()),
            sink_methods: slicekit_core::slicer::default_sink_methods(),
            mode: DataflowMode::Paper,
            output_format: OutputFormat::Text,
            emit_graph: false,
        }
    }

    pub fn graph(input_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            input_path: input_path.into(),
            method_name: None,
            stream_variable: None,
            sink_methods: slicekit_core::slicer::default_sink_methods(),
            mode: DataflowMode::Paper,
            output_format: OutputFormat::Dot,
            emit_graph: true,
        }
    }
}

/// True when diagnostics may use ANSI styling: stderr is a terminal and
/// `SLICEKIT_COLOR` is not set to `0`.
pub fn color_enabled() -> bool {
    use std::io::IsTerminal;
    if std::env::var("SLICEKIT_COLOR").is_ok_and(|v| v == "0") {
        return false;
    }
    std::io::stderr().is_terminal()
}

fn emit_diagnostic(err_out: &mut dyn Write, severity: &str, message: &str) {
    let line = if color_enabled() {
        let color = if severity == "error" { "31" } else { "33" };
        format!("\x1b[1;{color}m{severity}:\x1b[0m {message}")
    } else {
        format!("{severity}: {message}")
    };
    let _ = writeln!(err_out, "{line}");
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::UnknownVariable(_) => EXIT_UNKNOWN_VARIABLE,
        _ => EXIT_FRONTEND,
    }
}

fn load_method(
    path: &Path,
    err_out: &mut dyn Write,
) -> Result<MethodAst, i32> {
    let source = fs::read_to_string(path).map_err(|err| {
        emit_diagnostic(err_out, "error", &format!("{}: {err}", path.display()));
        EXIT_IO
    })?;
    parse_method(&source).map_err(|err| {
        emit_diagnostic(err_out, "error", &format!("{}:{err}", path.display()));
        exit_code_for(&err)
    })
}

/// Runs one slice or graph invocation; returns the process exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write, err_out: &mut dyn Write) -> i32 {
    let method = match load_method(&config.input_path, err_out) {
        Ok(method) => method,
        Err(code) => return code,
    };

    if config.emit_graph {
        let graph = build_graph_with(&method, config.mode);
        let payload = match config.output_format {
            OutputFormat::Json => to_json(&graph, &method),
            _ => to_dot(&graph, &method),
        };
        let _ = write!(out, "{payload}");
        return EXIT_OK;
    }

    let Some(stream_variable) = &config.stream_variable else {
        emit_diagnostic(err_out, "error", "slicing requires a stream variable");
        return EXIT_UNKNOWN_VARIABLE;
    };
    let criterion =
        SliceCriterion::with_sinks(stream_variable.clone(), config.sink_methods.iter().cloned());
    let slice = match compute_slice_with(&method, &criterion, config.mode) {
        Ok(slice) => slice,
        Err(err) => {
            emit_diagnostic(
                err_out,
                "error",
                &format!("{}: {err}", config.input_path.display()),
            );
            return exit_code_for(&err);
        }
    };

    for warning in &slice.warnings {
        emit_diagnostic(err_out, "warning", warning);
    }
    match config.output_format {
        OutputFormat::Json => {
            let _ = write!(out, "{}", slice.to_json());
        }
        _ => {
            let _ = write!(out, "{}", slice.rendered_text);
        }
    }
    EXIT_OK
}

// --- corpus runner -----------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
struct CorpusReport {
    failed: usize,
    files: Vec<FileReport>,
    passed: usize,
    total: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
struct FileReport {
    file: String,
    missing_node_ids: Vec<usize>,
    status: String,
    unexpected_node_ids: Vec<usize>,
}

/// Checks every `.mj` file in `directory` against its `.expected.json`
/// golden slice. The JSON report goes to stdout, a `passed/total pass`
/// summary to stderr. Exit 0 when all match, 1 on any mismatch, 3 on a
/// missing golden or unreadable directory.
pub fn run_corpus(directory: &Path, out: &mut dyn Write, err_out: &mut dyn Write) -> i32 {
    let mut sources: Vec<PathBuf> = match fs::read_dir(directory) {
        Ok(entries) => entries
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|path| path.extension().is_some_and(|ext| ext == "mj"))
            .collect(),
        Err(err) => {
            emit_diagnostic(err_out, "error", &format!("{}: {err}", directory.display()));
            return EXIT_IO;
        }
    };
    sources.sort();

    let mut files = Vec::new();
    for source_path in &sources {
        let golden_path = source_path.with_extension("expected.json");
        if !golden_path.exists() {
            emit_diagnostic(
                err_out,
                "error",
                &format!("missing golden {}", golden_path.display()),
            );
            return EXIT_IO;
        }
        let golden_text = match fs::read_to_string(&golden_path) {
            Ok(text) => text,
            Err(err) => {
                emit_diagnostic(err_out, "error", &format!("{}: {err}", golden_path.display()));
                return EXIT_IO;
            }
        };
        let golden = match SliceDoc::from_json(&golden_text) {
            Ok(doc) => doc,
            Err(err) => {
                emit_diagnostic(err_out, "error", &format!("{}: {err}", golden_path.display()));
                return EXIT_IO;
            }
        };

        let method = match load_method(source_path, err_out) {
            Ok(method) => method,
            Err(code) => return code,
        };
        let actual = match compute_slice_with(&method, &golden.criterion, DataflowMode::Paper) {
            Ok(slice) => slice,
            Err(err) => {
                emit_diagnostic(err_out, "error", &format!("{}: {err}", source_path.display()));
                return exit_code_for(&err);
            }
        };

        let matches = actual.to_json() == golden_text;
        let file_name = source_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        files.push(FileReport {
            file: file_name,
            missing_node_ids: golden.nodes.difference(&actual.nodes).copied().collect(),
            status: if matches { "pass" } else { "fail" }.to_string(),
            unexpected_node_ids: actual.nodes.difference(&golden.nodes).copied().collect(),
        });
    }

    let total = files.len();
    let passed = files.iter().filter(|f| f.status == "pass").count();
    let report = CorpusReport {
        failed: total - passed,
        files,
        passed,
        total,
    };
    let mut payload = serde_json::to_string_pretty(&report).expect("report serializes");
    payload.push('\n');
    let _ = write!(out, "{payload}");
    let _ = writeln!(err_out, "{passed}/{total} pass");

    if passed == total {
        EXIT_OK
    } else {
        EXIT_FRONTEND
    }
}
