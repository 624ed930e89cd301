//! Plain-text code description files.
//!
//! ```text
//! # five-qubit code as a CWS code
//! n 5
//! c 0
//! stabilizer +XZZXI
//! ...
//! word +IIIII
//! word +XXXXX
//! ```
//!
//! Dense codes list basis vectors instead, each as `amp <index> <re> <im>`
//! lines closed by `endstate`. Basis indices are big-endian (qubit 0 is the
//! most significant bit). Blank lines and `#` comments are ignored.

use crate::analysis::{CwsCode, DenseCode};
use crate::error::{Error, Result};
use crate::pauli::{PauliGroup, PauliOperator};
use num_complex::Complex64;
use std::path::Path;

#[derive(Clone, Debug)]
pub enum CodeFile {
    Cws(CwsCode),
    Dense(DenseCode),
}

impl CodeFile {
    pub fn n(&self) -> usize {
        match self {
            CodeFile::Cws(c) => c.n(),
            CodeFile::Dense(d) => d.n(),
        }
    }

    pub fn c(&self) -> usize {
        match self {
            CodeFile::Cws(c) => c.c(),
            CodeFile::Dense(d) => d.c(),
        }
    }

    /// The dense form, building it from the CWS description if needed.
    pub fn dense(&self) -> Result<DenseCode> {
        match self {
            CodeFile::Cws(c) => crate::analysis::dense_from_cws(c),
            CodeFile::Dense(d) => Ok(d.clone()),
        }
    }

    pub fn cws(&self) -> Option<&CwsCode> {
        match self {
            CodeFile::Cws(c) => Some(c),
            CodeFile::Dense(_) => None,
        }
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn read_code_file(path: impl AsRef<Path>) -> Result<CodeFile> {
    let text = std::fs::read_to_string(path)?;
    parse_code(&text)
}

pub fn parse_code(text: &str) -> Result<CodeFile> {
    let mut n: Option<usize> = None;
    let mut c: Option<usize> = None;
    let mut stabilizers: Vec<(usize, PauliOperator)> = Vec::new();
    let mut words: Vec<(usize, PauliOperator)> = Vec::new();
    let mut states: Vec<Vec<(usize, usize, Complex64)>> = Vec::new();
    let mut current: Option<Vec<(usize, usize, Complex64)>> = None;
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let key = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let one_arg = |what: &str| -> Result<&str> {
            match args.as_slice() {
                [a] => Ok(a),
                _ => Err(perr(line, format!("`{what}` takes exactly one argument"))),
            }
        };
        match key {
            "n" | "c" => {
                let v: usize = one_arg(key)?.parse().map_err(|_| perr(line, format!("invalid integer for `{key}`")))?;
                let slot = if key == "n" { &mut n } else { &mut c };
                if slot.replace(v).is_some() {
                    return Err(perr(line, format!("`{key}` given twice")));
                }
            }
            "stabilizer" | "word" => {
                let p: PauliOperator = one_arg(key)?.parse().map_err(|e: Error| perr(line, e.to_string()))?;
                if key == "stabilizer" {
                    stabilizers.push((line, p))
                } else {
                    words.push((line, p))
                }
            }
            "amp" => {
                let [idx, re, im] = args.as_slice() else {
                    return Err(perr(line, "`amp` takes an index and two floats"));
                };
                let idx: usize = idx.parse().map_err(|_| perr(line, "invalid basis index"))?;
                let re: f64 = re.parse().map_err(|_| perr(line, "invalid real part"))?;
                let im: f64 = im.parse().map_err(|_| perr(line, "invalid imaginary part"))?;
                current.get_or_insert_with(Vec::new).push((line, idx, Complex64::new(re, im)));
            }
            "endstate" => {
                if !args.is_empty() {
                    return Err(perr(line, "`endstate` takes no arguments"));
                }
                match current.take() {
                    Some(s) => states.push(s),
                    None => return Err(perr(line, "`endstate` without amplitudes")),
                }
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    if current.is_some() {
        return Err(perr(last_line, "state not closed by `endstate`"));
    }
    let n = n.ok_or_else(|| perr(last_line, "missing `n`"))?;
    let c = c.unwrap_or(0);
    let total = n + c;

    let cws = !stabilizers.is_empty() || !words.is_empty();
    if cws && !states.is_empty() {
        return Err(perr(last_line, "file mixes a CWS description with dense amplitudes"));
    }
    if cws {
        for (line, p) in &stabilizers {
            if p.qubits() != total {
                return Err(perr(*line, format!("stabilizer has {} qubits, expected n + c = {total}", p.qubits())));
            }
        }
        for (line, p) in &words {
            if p.qubits() != n {
                return Err(perr(*line, format!("word has {} qubits, expected n = {n}", p.qubits())));
            }
        }
        let gens: Vec<PauliOperator> = stabilizers.iter().map(|(_, p)| *p).collect();
        let s = PauliGroup::close(total, &gens, true)?;
        let ws = words.into_iter().map(|(_, p)| p).collect();
        return Ok(CodeFile::Cws(CwsCode::new(n, c, s, ws)?));
    }
    if states.is_empty() {
        return Err(perr(last_line, "no stabilizers, words or states"));
    }
    if total >= usize::BITS as usize - 1 {
        return Err(perr(last_line, "too many qubits"));
    }
    let dim = 1usize << total;
    let mut basis = Vec::with_capacity(states.len());
    for s in states {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        for (line, idx, a) in s {
            if idx >= dim {
                return Err(perr(line, format!("basis index {idx} out of range for {total} qubits")));
            }
            v[idx] += a;
        }
        basis.push(v);
    }
    Ok(CodeFile::Dense(DenseCode::new(n, c, basis)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cws_file() {
        let f = parse_code("# epr\nn 2\nc 0\nstabilizer +XX\nstabilizer +ZZ\nword +II\n").unwrap();
        let code = f.cws().unwrap();
        assert_eq!((code.n(), code.c(), code.size()), (2, 0, 1));
    }

    #[test]
    fn parses_dense_file() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!("n 1\nc 0\namp 0 {h} 0\namp 1 {h} 0\nendstate\namp 0 {h} 0\namp 1 -{h} 0\nendstate\n");
        let f = parse_code(&text).unwrap();
        assert!(matches!(f, CodeFile::Dense(ref d) if d.size() == 2));
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_code("n 2\nc 0\nstabilizer +XQ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_code("n 2\nbogus 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(parse_code("").unwrap_err(), Error::Parse { .. }));
        let err = parse_code("n 2\nc 0\namp 0 1 0\n").unwrap_err();
        assert!(err.to_string().contains("endstate"));
    }

    #[test]
    fn wrong_lengths_rejected() {
        let err = parse_code("n 2\nc 1\nstabilizer +XX\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }
}
