//! Integer models of quadric-generated projective varieties and the
//! line-oriented model file format:
//!
//! ```text
//! # comment
//! vars: x0 x1 x2 x3
//! n: 1
//! gen: x1^2 - x0x2
//! gen: x3^2 - x1x2 + x0x1
//! exclude: 2
//! seed: 11
//! oracle: plane-cubic x1^2x2 - x0^3 + x0x2^2
//! ```

use crate::char_zero::{general_product, GeneralCombinationConfig, GeneralProduct};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::Polynomial;
use crate::power::Limits;
use crate::ring::{is_prime, Integers};

/// The raw contents of a model file, before any validation beyond syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub nvars: usize,
    pub dim: Option<u32>,
    pub gens: Vec<Polynomial<Integers>>,
    /// Source line of each generator.
    pub gen_lines: Vec<usize>,
    pub exclude: Vec<u64>,
    pub seed: Option<u64>,
    pub oracle: Option<Polynomial<Integers>>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Field<'a> {
    line: usize,
    /// Column of the first character of `value` minus one.
    offset: usize,
    value: &'a str,
}

impl Field<'_> {
    fn poly(&self, nvars: usize) -> Result<Polynomial<Integers>> {
        Polynomial::parse(Integers, self.value, Some(nvars)).map_err(|e| match e {
            Error::Parse { column, message, .. } => parse_error(self.line, self.offset + column, message),
            other => other,
        })
    }

    fn error(&self, message: impl Into<String>) -> Error {
        parse_error(self.line, self.offset + 1, message)
    }

    fn words(&self) -> impl Iterator<Item = (usize, &str)> {
        let base = self.value.as_ptr() as usize;
        self.value
            .split_whitespace()
            .map(move |w| (self.offset + 1 + w.as_ptr() as usize - base, w))
    }
}

pub fn parse_model_file(text: &str) -> Result<ModelFile> {
    let mut vars: Option<(Field, usize)> = None;
    let mut dim = None;
    let mut gens = Vec::new();
    let mut exclude = Vec::new();
    let mut seed = None;
    let mut oracle = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(parse_error(line, col, "expected 'key: value'"));
        };
        let key = content[..colon].trim();
        let field = Field {
            line,
            offset: content[..=colon].chars().count(),
            value: &content[colon + 1..],
        };
        match key {
            "vars" => {
                let mut count = 0;
                for (i, (col, w)) in field.words().enumerate() {
                    if w != format!("x{i}") {
                        return Err(parse_error(line, col, format!("expected variable x{i}, found {w}")));
                    }
                    count += 1;
                }
                if count < 2 {
                    return Err(field.error("at least two variables are required"));
                }
                vars = Some((field, count));
            }
            "n" => {
                dim = Some(field.value.trim().parse::<u32>().map_err(|_| field.error("expected a dimension"))?);
            }
            "gen" => gens.push(field),
            "exclude" => {
                for (col, w) in field.words() {
                    let p: u64 = w.parse().map_err(|_| parse_error(line, col, "expected a prime"))?;
                    if !is_prime(p) {
                        return Err(parse_error(line, col, format!("{p} is not prime")));
                    }
                    exclude.push(p);
                }
            }
            "seed" => {
                seed = Some(field.value.trim().parse::<u64>().map_err(|_| field.error("expected a 64-bit seed"))?);
            }
            "oracle" => {
                let trimmed = field.value.trim_start();
                let lead = field.value.len() - trimmed.len();
                let Some(rest) = trimmed.strip_prefix("plane-cubic") else {
                    return Err(field.error("only 'plane-cubic <poly>' oracles are supported"));
                };
                let inner = Field {
                    line,
                    offset: field.offset + lead + "plane-cubic".len(),
                    value: rest,
                };
                let cubic = inner.poly(3)?;
                if cubic.homogeneous_degree() != Some(3) {
                    return Err(inner.error("oracle must be a homogeneous cubic in x0 x1 x2"));
                }
                oracle = Some(cubic);
            }
            other => {
                let col = content.len() - content.trim_start().len() + 1;
                return Err(parse_error(line, col, format!("unknown key {other:?}")));
            }
        }
    }
    let nvars = match &vars {
        Some((_, n)) => *n,
        None => return Err(parse_error(1, 1, "missing 'vars:' line")),
    };
    if gens.is_empty() {
        return Err(parse_error(1, 1, "no 'gen:' lines"));
    }
    let gen_lines = gens.iter().map(|f| f.line).collect();
    let gens = gens.iter().map(|f| f.poly(nvars)).collect::<Result<Vec<_>>>()?;
    exclude.sort_unstable();
    exclude.dedup();
    Ok(ModelFile {
        nvars,
        dim,
        gens,
        gen_lines,
        exclude,
        seed,
        oracle,
    })
}

/// A quadric-generated `X ⊂ P^N` over ℤ with its general product `h`.
#[derive(Clone, Debug)]
pub struct IntegerModel {
    pub ideal: Ideal<Integers>,
    /// `N`.
    pub ambient_dim: u32,
    /// `n = dim X`.
    pub dim: u32,
    /// `r = N − n`.
    pub codim: u32,
    pub config: GeneralCombinationConfig,
    pub product: GeneralProduct,
    pub excluded_primes: Vec<u64>,
    pub oracle: Option<Polynomial<Integers>>,
    /// Hilbert functions over ℚ of the ideal and of `(g_1..g_r)`.
    pub hilbert_ideal: Vec<u64>,
    pub hilbert_combinations: Vec<u64>,
}

impl IntegerModel {
    /// Last degree compared by the good-prime test: twice the generator
    /// degree plus two.
    pub const HILBERT_DEGREE: u32 = 6;

    /// Validates a parsed file; `cfg.seed` is replaced by the file's seed
    /// when `prefer_file_seed` is set and the file has one.
    pub fn build(file: ModelFile, mut cfg: GeneralCombinationConfig, prefer_file_seed: bool, limits: &Limits) -> Result<Self> {
        let ambient = file.nvars as u32 - 1;
        let dim = file.dim.ok_or_else(|| parse_error(1, 1, "missing 'n:' line"))?;
        for (g, &line) in file.gens.iter().zip(&file.gen_lines) {
            if g.homogeneous_degree() != Some(2) {
                return Err(parse_error(line, 1, format!("generator {g} is not a quadratic form")));
            }
        }
        if dim >= ambient {
            return Err(Error::invalid(format!("n = {dim} must be below N = {ambient}")));
        }
        let codim = ambient - dim;
        if codim < dim + 1 {
            return Err(Error::invalid(format!("r = N - n = {codim} is below n + 1 = {}", dim + 1)));
        }
        if prefer_file_seed {
            if let Some(s) = file.seed {
                cfg.seed = s;
            }
        }
        let ideal = Ideal::new(Integers, file.nvars, file.gens.clone())?;
        let product = general_product(&file.gens, codim, &cfg, limits)?;
        let combos = Ideal::new(Integers, file.nvars, product.combinations.clone())?;
        let hilbert_ideal = ideal.rational_hilbert_function(0..=Self::HILBERT_DEGREE, limits)?;
        let hilbert_combinations = combos.rational_hilbert_function(0..=Self::HILBERT_DEGREE, limits)?;
        Ok(IntegerModel {
            ideal,
            ambient_dim: ambient,
            dim,
            codim,
            config: cfg,
            product,
            excluded_primes: file.exclude,
            oracle: file.oracle,
            hilbert_ideal,
            hilbert_combinations,
        })
    }

    pub fn nvars(&self) -> usize {
        self.ideal.nvars()
    }

    /// Exponent `2r − N − 1` of the containment tested at each prime,
    /// clamped at zero.
    pub fn containment_exponent(&self) -> u32 {
        (2 * self.codim).saturating_sub(self.ambient_dim + 1)
    }
}

pub fn parse_model(text: &str) -> Result<IntegerModel> {
    let file = parse_model_file(text)?;
    IntegerModel::build(file, GeneralCombinationConfig::default(), true, &Limits::default())
}
