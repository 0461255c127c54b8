//! Flat `key = value` run configuration. Lists are written as repeated keys;
//! `#` starts a comment. Field values use the coefficient text syntax.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::algebra::GradingBasis;
use crate::coeff::{parse_field, FieldElement};
use crate::error::{Error, Result};
use crate::hwmod::{Direction, TruncationParams};
use crate::l0mod::{
    psi_from_exp_poly_even, psi_from_exp_poly_odd, remark52_character, Character, EvalModuleSpec,
    ExpPolyDataEven, ExpPolyDataOdd, PsiA,
};
use crate::ztwo::SubmoduleSpecW;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendChoice {
    Exact,
    Prime,
    Both,
}

pub fn parse_backend(s: &str) -> Result<BackendChoice> {
    match s {
        "exact" => Ok(BackendChoice::Exact),
        "prime" => Ok(BackendChoice::Prime),
        "both" => Ok(BackendChoice::Both),
        _ => Err(Error::Usage(format!(
            "unknown backend `{s}` (exact, prime, both)"
        ))),
    }
}

#[derive(Clone, Debug)]
pub enum ModuleData {
    Character(Character),
    Eval(EvalModuleSpec),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub basis: GradingBasis,
    pub module: ModuleData,
    pub trunc: TruncationParams,
    pub backend: BackendChoice,
    pub seed: u64,
    pub direction: Direction,
    pub w: Option<SubmoduleSpecW>,
    pub loop_window: i64,
    pub max_order: usize,
    pub qf_window: i64,
    pub output_json: Option<PathBuf>,
    pub output_csv: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "basis.m1",
    "basis.m2",
    "module",
    "psi",
    "psi.beta",
    "psi.t01",
    "root",
    "value",
    "seq",
    "slot",
    "window",
    "probe",
    "depth",
    "backend",
    "seed",
    "direction",
    "w.modulus",
    "w.residues",
    "loop",
    "max_order",
    "qf_window",
    "output.json",
    "output.csv",
];

/// Raw entries with their line numbers.
struct Entries {
    map: BTreeMap<String, Vec<(usize, String)>>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map: BTreeMap<String, Vec<(usize, String)>> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config {
                    line: n + 1,
                    key: line.to_string(),
                    message: "expected `key = value`".into(),
                });
            };
            let k = k.trim().to_string();
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Config {
                    line: n + 1,
                    key: k,
                    message: "unknown key".into(),
                });
            }
            map.entry(k)
                .or_default()
                .push((n + 1, v.trim().to_string()));
        }
        Ok(Entries { map })
    }

    fn all(&self, key: &str) -> &[(usize, String)] {
        self.map.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    fn one(&self, key: &str) -> Result<Option<(usize, &str)>> {
        match self.all(key) {
            [] => Ok(None),
            [(n, v)] => Ok(Some((*n, v.as_str()))),
            [_, (n, _), ..] => Err(Error::Config {
                line: *n,
                key: key.into(),
                message: "key given more than once".into(),
            }),
        }
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.one(key)? {
            None => Ok(default),
            Some((n, v)) => v.parse().map_err(|_| Error::Config {
                line: n,
                key: key.into(),
                message: format!("cannot parse `{v}`"),
            }),
        }
    }
}

fn cfg_err(line: usize, key: &str, e: impl std::fmt::Display) -> Error {
    Error::Config {
        line,
        key: key.into(),
        message: e.to_string(),
    }
}

fn pair(line: usize, key: &str, v: &str) -> Result<(i64, i64)> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(cfg_err(
                line,
                key,
                format!("expected two integers, got `{v}`"),
            )),
        },
        _ => Err(cfg_err(line, key, format!("expected `a, b`, got `{v}`"))),
    }
}

fn field(line: usize, key: &str, v: &str) -> Result<FieldElement> {
    parse_field(v.trim()).map_err(|e| cfg_err(line, key, e))
}

fn field_list(line: usize, key: &str, v: &str) -> Result<Vec<FieldElement>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| field(line, key, x)).collect()
}

fn int(line: usize, key: &str, v: &str) -> Result<i64> {
    v.trim()
        .parse()
        .map_err(|_| cfg_err(line, key, format!("expected an integer, got `{v}`")))
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let e = Entries::parse(text)?;
        let m1 = match e.one("basis.m1")? {
            Some((n, v)) => pair(n, "basis.m1", v)?,
            None => (1, 0),
        };
        let m2 = match e.one("basis.m2")? {
            Some((n, v)) => pair(n, "basis.m2", v)?,
            None => (0, 1),
        };
        let line = e.one("basis.m2")?.map_or(0, |x| x.0);
        let basis = GradingBasis::new(m1, m2).map_err(|err| cfg_err(line, "basis.m2", err))?;
        let module = parse_module(&e, &basis)?;
        let trunc = TruncationParams::new(
            e.parsed("window", 4)?,
            e.parsed("probe", e.parsed("window", 4)?)?,
            e.parsed("depth", 2)?,
        )?;
        let direction = match e.one("direction")? {
            None | Some((_, "highest")) => Direction::Highest,
            Some((_, "lowest")) => Direction::Lowest,
            Some((n, v)) => {
                return Err(cfg_err(n, "direction", format!("unknown direction `{v}`")))
            }
        };
        let w = parse_w(&e)?;
        Ok(RunConfig {
            basis,
            module,
            trunc,
            backend: match e.one("backend")? {
                None => BackendChoice::Exact,
                Some((n, v)) => v.parse().map_err(|err| cfg_err(n, "backend", err))?,
            },
            seed: e.parsed("seed", 1)?,
            direction,
            w,
            loop_window: e.parsed("loop", 3)?,
            max_order: e.parsed("max_order", 4)?,
            qf_window: e.parsed("qf_window", 8)?,
            output_json: e.one("output.json")?.map(|x| PathBuf::from(x.1)),
            output_csv: e.one("output.csv")?.map(|x| PathBuf::from(x.1)),
        })
    }
}

fn parse_w(e: &Entries) -> Result<Option<SubmoduleSpecW>> {
    let rows = e.all("w.residues");
    if rows.is_empty() {
        return Ok(None);
    }
    let modulus = e.parsed("w.modulus", 1)?;
    let mut residues = Vec::new();
    for (n, v) in rows {
        if v == "none" {
            residues.push(Vec::new());
            continue;
        }
        residues.push(
            v.split(',')
                .map(|x| int(*n, "w.residues", x))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let line = rows[0].0;
    SubmoduleSpecW::new(modulus, residues)
        .map(Some)
        .map_err(|err| cfg_err(line, "w.residues", err))
}

fn parse_module(e: &Entries, basis: &GradingBasis) -> Result<ModuleData> {
    let kind = e.one("module")?.map_or("character", |x| x.1);
    let line = e.one("module")?.map_or(0, |x| x.0);
    let odd = basis.m21_odd();
    match (kind, odd) {
        ("character", true) => Err(Error::ParityMismatch(
            "m21 is odd; use `module = eval`".into(),
        )),
        ("eval", false) => Err(Error::ParityMismatch(
            "m21 is even; use `module = character`".into(),
        )),
        ("character", false) => Ok(ModuleData::Character(parse_character(e, basis)?)),
        ("eval", true) => {
            let psi = parse_psi_a(e, basis)?;
            let (mut mu, mut dims) = (Vec::new(), Vec::new());
            for (n, v) in e.all("slot") {
                let Some((a, d)) = v.split_once(';') else {
                    return Err(cfg_err(*n, "slot", "expected `mu ; dim`"));
                };
                mu.push(field(*n, "slot", a)?);
                dims.push(int(*n, "slot", d)? as usize);
            }
            let spec =
                EvalModuleSpec::new(mu, dims, psi).map_err(|err| cfg_err(line, "slot", err))?;
            Ok(ModuleData::Eval(spec))
        }
        (other, _) => Err(cfg_err(
            line,
            "module",
            format!("unknown module kind `{other}`"),
        )),
    }
}

fn overrides(e: &Entries) -> Result<(Option<FieldElement>, Option<FieldElement>)> {
    let beta = match e.one("psi.beta")? {
        Some((n, v)) => Some(field(n, "psi.beta", v)?),
        None => None,
    };
    let t01 = match e.one("psi.t01")? {
        Some((n, v)) => Some(field(n, "psi.t01", v)?),
        None => None,
    };
    Ok((beta, t01))
}

fn parse_character(e: &Entries, basis: &GradingBasis) -> Result<Character> {
    let kind = e.one("psi")?.map_or("zero", |x| x.1);
    let line = e.one("psi")?.map_or(0, |x| x.0);
    let (beta, t01) = overrides(e)?;
    let mut c = match kind {
        "zero" => Character::zero(*basis)?,
        "remark52" => remark52_character(basis)?,
        "exppoly" => {
            let mut roots = Vec::new();
            let mut tables = [Vec::new(), Vec::new()];
            for (n, v) in e.all("root") {
                let parts: Vec<&str> = v.split(';').collect();
                if parts.len() != 3 {
                    return Err(cfg_err(
                        *n,
                        "root",
                        "expected `root ; coeffs j=0 ; coeffs j=1`",
                    ));
                }
                roots.push(field(*n, "root", parts[0])?);
                tables[0].push(field_list(*n, "root", parts[1])?);
                tables[1].push(field_list(*n, "root", parts[2])?);
            }
            let data =
                ExpPolyDataEven::new(roots, tables).map_err(|err| cfg_err(line, "root", err))?;
            psi_from_exp_poly_even(&data, basis)?
        }
        "values" | "sequence" => {
            let key = if kind == "values" { "value" } else { "seq" };
            let mut map = BTreeMap::new();
            for (n, v) in e.all(key) {
                let parts: Vec<&str> = v.splitn(3, ',').collect();
                if parts.len() != 3 {
                    return Err(cfg_err(*n, key, "expected `j, i, value`"));
                }
                let j = int(*n, key, parts[0])?;
                if !(0..2).contains(&j) {
                    return Err(cfg_err(*n, key, "parity must be 0 or 1"));
                }
                map.insert(
                    (j as u8, int(*n, key, parts[1])?),
                    field(*n, key, parts[2])?,
                );
            }
            if kind == "values" {
                Character::from_values(
                    *basis,
                    map,
                    beta.clone().unwrap_or_else(FieldElement::zero),
                    t01.clone().unwrap_or_else(FieldElement::zero),
                )?
            } else {
                Character::from_sequence(*basis, map)?
            }
        }
        other => return Err(cfg_err(line, "psi", format!("unknown character `{other}`"))),
    };
    if let Some(b) = beta {
        c = c.with_psi_beta(b);
    }
    if let Some(t) = t01 {
        c = c.with_psi_t01(t);
    }
    Ok(c)
}

fn parse_psi_a(e: &Entries, basis: &GradingBasis) -> Result<PsiA> {
    let kind = e.one("psi")?.map_or("zero", |x| x.1);
    let line = e.one("psi")?.map_or(0, |x| x.0);
    let (beta, _) = overrides(e)?;
    match kind {
        "zero" => PsiA::zero(*basis),
        "exppoly" => {
            let (mut roots, mut coeffs) = (Vec::new(), Vec::new());
            for (n, v) in e.all("root") {
                let Some((r, c)) = v.split_once(';') else {
                    return Err(cfg_err(*n, "root", "expected `root ; coeffs`"));
                };
                roots.push(field(*n, "root", r)?);
                coeffs.push(field_list(*n, "root", c)?);
            }
            let data =
                ExpPolyDataOdd::new(roots, coeffs).map_err(|err| cfg_err(line, "root", err))?;
            psi_from_exp_poly_odd(&data, basis)
        }
        "values" | "sequence" => {
            let key = if kind == "values" { "value" } else { "seq" };
            let mut map = BTreeMap::new();
            for (n, v) in e.all(key) {
                let Some((i, x)) = v.split_once(',') else {
                    return Err(cfg_err(*n, key, "expected `i, value`"));
                };
                map.insert(int(*n, key, i)?, field(*n, key, x)?);
            }
            if kind == "values" {
                PsiA::from_values(*basis, map, beta.unwrap_or_else(FieldElement::zero))
            } else {
                PsiA::from_sequence(*basis, map)
            }
        }
        other => Err(cfg_err(
            line,
            "psi",
            format!("unknown functional `{other}`"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remark52_config() {
        let c = RunConfig::parse(
            "# standard basis\nbasis.m1 = 1, 0\nbasis.m2 = 0, 1\npsi = remark52\nwindow = 4\ndepth = 3\n",
        )
        .unwrap();
        let ModuleData::Character(psi) = &c.module else {
            panic!("expected a character")
        };
        assert_eq!(psi.psi_t01(), &FieldElement::one());
        assert_eq!(c.trunc.probe_window, 4);
        assert_eq!(c.trunc.max_depth, 3);
    }

    #[test]
    fn diagnostics_carry_line_and_key() {
        let err = RunConfig::parse("psi = remark52\nwindow = four\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, ref key, .. } if key == "window"));
        let err = RunConfig::parse("\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
        let err = RunConfig::parse("basis.m1 = 2, 0\nbasis.m2 = 0, 1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
        let err =
            RunConfig::parse("basis.m1 = 0, 1\nbasis.m2 = 1, 0\npsi = remark52\n").unwrap_err();
        assert!(matches!(err, Error::ParityMismatch(_)));
    }

    #[test]
    fn eval_and_pattern() {
        let c = RunConfig::parse(
            "basis.m1 = 0, 1\nbasis.m2 = 1, 0\nmodule = eval\nslot = 1 ; 3\nw.modulus = 2\nw.residues = 0\nw.residues = 1\nw.residues = 0\n",
        )
        .unwrap();
        let ModuleData::Eval(spec) = &c.module else {
            panic!("expected an evaluation module")
        };
        assert_eq!(spec.dims, vec![3]);
        assert_eq!(c.w.unwrap().residues, vec![vec![0], vec![1], vec![0]]);
    }
}
