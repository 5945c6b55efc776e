//! Trace files: `text-bits` and `run-length`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context};

use crate::config::TraceFormat;

pub const RUN_SEPARATOR: char = '×';

pub fn encode(trace: &[bool], memory: usize, format: TraceFormat) -> anyhow::Result<String> {
    ensure!(!trace.is_empty(), "refusing to export an empty trace");
    ensure!(memory > 0, "line width must be positive");
    let mut out = String::with_capacity(trace.len() + trace.len() / memory + 1);
    match format {
        TraceFormat::TextBits => {
            for line in trace.chunks(memory) {
                out.extend(line.iter().map(|&b| if b { '1' } else { '0' }));
                out.push('\n');
            }
        }
        TraceFormat::RunLength => {
            let mut i = 0;
            while i < trace.len() {
                let bit = trace[i];
                let run = trace[i..].iter().take_while(|&&b| b == bit).count();
                writeln!(out, "{}{RUN_SEPARATOR}{run}", bit as u8).expect("string write");
                i += run;
            }
        }
    }
    Ok(out)
}

pub fn decode(text: &str, format: TraceFormat) -> anyhow::Result<Vec<bool>> {
    let mut trace = Vec::new();
    match format {
        TraceFormat::TextBits => {
            for (n, ch) in text.chars().enumerate() {
                match ch {
                    '0' => trace.push(false),
                    '1' => trace.push(true),
                    c if c.is_whitespace() => {}
                    c => bail!("unexpected {c:?} at character {n}"),
                }
            }
        }
        TraceFormat::RunLength => {
            for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let (value, count) = line
                    .trim()
                    .split_once(RUN_SEPARATOR)
                    .with_context(|| format!("line {}: expected value{RUN_SEPARATOR}count", n + 1))?;
                let bit = match value {
                    "0" => false,
                    "1" => true,
                    v => bail!("line {}: bad value {v:?}", n + 1),
                };
                let count: usize = count
                    .parse()
                    .with_context(|| format!("line {}: bad count {count:?}", n + 1))?;
                ensure!(count > 0, "line {}: empty run", n + 1);
                trace.extend(std::iter::repeat(bit).take(count));
            }
        }
    }
    Ok(trace)
}

pub fn export_trace(
    trace: &[bool],
    memory: usize,
    path: &Path,
    format: TraceFormat,
) -> anyhow::Result<()> {
    let text = encode(trace, memory, format)?;
    fs::write(path, text).with_context(|| format!("writing trace {}", path.display()))
}

pub fn import_trace(path: &Path, format: TraceFormat) -> anyhow::Result<Vec<bool>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading trace {}", path.display()))?;
    decode(&text, format).with_context(|| format!("parsing trace {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn text_bits_wraps_at_memory() {
        let t = bits("0010011");
        assert_eq!(encode(&t, 3, TraceFormat::TextBits).unwrap(), "001\n001\n1\n");
    }

    #[test]
    fn run_length_lines() {
        let t = bits("0001100000");
        assert_eq!(
            encode(&t, 4, TraceFormat::RunLength).unwrap(),
            "0×3\n1×2\n0×5\n"
        );
        assert_eq!(encode(&[false; 50], 4, TraceFormat::RunLength).unwrap(), "0×50\n");
    }

    #[test]
    fn round_trips() {
        let t = bits("1101000111010100001");
        for f in [TraceFormat::TextBits, TraceFormat::RunLength] {
            assert_eq!(decode(&encode(&t, 5, f).unwrap(), f).unwrap(), t);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(encode(&[], 3, TraceFormat::TextBits).is_err());
        assert!(decode("01a", TraceFormat::TextBits).is_err());
        assert!(decode("2×3", TraceFormat::RunLength).is_err());
        assert!(decode("1×0", TraceFormat::RunLength).is_err());
        assert!(decode("1-3", TraceFormat::RunLength).is_err());
    }
}
