use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot write `{}`: {source}", path.display())]
    Unwritable { path: PathBuf, source: io::Error },

    #[error("cannot resume from `{}`: {reason}", path.display())]
    Resume { path: PathBuf, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("{0}")]
    Lib(#[from] pagraph::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 2 for exhausted budgets, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_budget() => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Resolves `path` against the output directory when it is relative.
pub fn resolve(out_dir: Option<&Path>, path: &Path) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// Fails unless `path` could be created or replaced, without touching it.
pub fn check_writable(path: &Path) -> CliResult<()> {
    let unwritable = |source| CliError::Unwritable {
        path: path.to_path_buf(),
        source,
    };
    if path.is_dir() {
        return Err(unwritable(io::Error::new(
            io::ErrorKind::IsADirectory,
            "is a directory",
        )));
    }
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let meta = fs::metadata(parent).map_err(unwritable)?;
    if !meta.is_dir() {
        return Err(unwritable(io::Error::new(
            io::ErrorKind::NotADirectory,
            "parent is not a directory",
        )));
    }
    if meta.permissions().readonly() {
        return Err(unwritable(io::Error::new(
            io::ErrorKind::PermissionDenied,
            "parent is read-only",
        )));
    }
    if path.exists() && fs::metadata(path).map_err(unwritable)?.permissions().readonly() {
        return Err(unwritable(io::Error::new(
            io::ErrorKind::PermissionDenied,
            "file is read-only",
        )));
    }
    Ok(())
}

/// Writes a whole artifact through a temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let wrap = |source| CliError::Unwritable {
        path: path.to_path_buf(),
        source,
    };
    fs::write(&tmp, bytes).map_err(wrap)?;
    fs::rename(&tmp, path).map_err(wrap)
}

/// Where a finished artifact goes.
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    pub fn emit(&self, bytes: &[u8]) -> CliResult<()> {
        match self {
            Sink::Stdout => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
            Sink::File(p) => write_atomic(p, bytes),
        }
    }

    /// Prints the human summary: to stdout next to a file artifact, to
    /// stderr when stdout carries the artifact.
    pub fn summary(&self, line: &str) {
        match self {
            Sink::Stdout => eprintln!("{line}"),
            Sink::File(_) => println!("{line}"),
        }
    }
}

/// Line-oriented per-trial output that is flushed after every batch, so an
/// interrupted run can be resumed.
pub struct TrialWriter {
    out: Box<dyn Write>,
}

impl TrialWriter {
    pub fn stdout() -> Self {
        TrialWriter {
            out: Box::new(io::stdout()),
        }
    }

    /// Starts a fresh file, replacing any existing one.
    pub fn create(path: &Path) -> CliResult<Self> {
        let file = File::create(path).map_err(|source| CliError::Unwritable {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(TrialWriter { out: Box::new(file) })
    }

    /// Reopens `path` for appending after its complete lines, which are
    /// returned. A trailing partial line is cut off.
    pub fn resume(path: &Path) -> CliResult<(Self, Vec<String>)> {
        let mut file = OpenOptions::new()
            .read(true)
            .write(true)
            .open(path)
            .map_err(|e| CliError::Resume {
                path: path.to_path_buf(),
                reason: e.to_string(),
            })?;
        let mut lines = Vec::new();
        let mut keep = 0u64;
        let mut reader = BufReader::new(&mut file);
        let mut buf = String::new();
        loop {
            buf.clear();
            let read = reader.read_line(&mut buf)?;
            if read == 0 || !buf.ends_with('\n') {
                break;
            }
            keep += read as u64;
            lines.push(buf.trim_end_matches('\n').to_string());
        }
        file.set_len(keep)?;
        file.seek(SeekFrom::End(0))?;
        Ok((TrialWriter { out: Box::new(file) }, lines))
    }

    pub fn write_lines(&mut self, lines: &[String]) -> CliResult<()> {
        for l in lines {
            self.out.write_all(l.as_bytes())?;
            self.out.write_all(b"\n")?;
        }
        self.out.flush()?;
        Ok(())
    }
}
