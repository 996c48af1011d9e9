//! Variable contexts: a z-block, an optional w-block of the same size (the
//! conjugate coordinates), and an optional block of auxiliary variables
//! (parameters, formal differentials, saturation variables).

use std::sync::Arc;

use crate::error::{Error, Result};

/// Which block a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Z,
    W,
    Extra,
}

/// Variable layout shared by every polynomial, ideal and foliation built
/// over it. Indices are laid out as `z1..zN, w1..wN, extras...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarContext {
    n_z: usize,
    n_w: usize,
    z_display: Vec<String>,
    extras: Vec<String>,
    priority: Vec<usize>,
}

impl VarContext {
    /// Context with `n` holomorphic coordinates only.
    pub fn z_only(n: usize) -> Arc<Self> {
        Arc::new(Self::build(n, false, Vec::new(), Vec::new()))
    }

    /// Context with `n` coordinates and their conjugates.
    pub fn zw(n: usize) -> Arc<Self> {
        Arc::new(Self::build(n, true, Vec::new(), Vec::new()))
    }

    /// Fully general constructor. `z_display` may be empty (defaults to
    /// `z1..zN`); extra names must not collide with canonical names.
    pub fn new(
        n_z: usize,
        with_w: bool,
        z_display: Vec<String>,
        extras: Vec<String>,
    ) -> Result<Arc<Self>> {
        if !z_display.is_empty() && z_display.len() != n_z {
            return Err(Error::InvalidInput(format!(
                "expected {} display names, got {}",
                n_z,
                z_display.len()
            )));
        }
        let ctx = Self::build(n_z, with_w, z_display, extras);
        for e in &ctx.extras {
            if !is_identifier(e) || parse_canonical(e, n_z, ctx.n_w).is_some() || e == "i" {
                return Err(Error::InvalidInput(format!("bad auxiliary variable name `{e}`")));
            }
        }
        let mut names: Vec<&String> = ctx.extras.iter().chain(ctx.z_display.iter()).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate variable names".into()));
        }
        Ok(Arc::new(ctx))
    }

    fn build(n_z: usize, with_w: bool, z_display: Vec<String>, extras: Vec<String>) -> Self {
        let z_display = if z_display.is_empty() {
            (1..=n_z).map(|k| format!("z{k}")).collect()
        } else {
            z_display
        };
        let n_w = if with_w { n_z } else { 0 };
        // canonical storage and printing lists conjugates first: w, z, extras
        let priority = (n_z..n_z + n_w)
            .chain(0..n_z)
            .chain(n_z + n_w..n_z + n_w + extras.len())
            .collect();
        VarContext {
            n_z,
            n_w,
            z_display,
            extras,
            priority,
        }
    }

    pub fn n_z(&self) -> usize {
        self.n_z
    }

    pub fn n_w(&self) -> usize {
        self.n_w
    }

    pub fn has_w(&self) -> bool {
        self.n_w > 0
    }

    pub fn extras(&self) -> &[String] {
        &self.extras
    }

    /// Total number of variables.
    pub fn len(&self) -> usize {
        self.n_z + self.n_w + self.extras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn block_of(&self, idx: usize) -> Block {
        if idx < self.n_z {
            Block::Z
        } else if idx < self.n_z + self.n_w {
            Block::W
        } else {
            Block::Extra
        }
    }

    pub fn z_index(&self, k: usize) -> usize {
        k
    }

    pub fn w_index(&self, k: usize) -> usize {
        debug_assert!(self.has_w());
        self.n_z + k
    }

    pub fn extra_index(&self, name: &str) -> Option<usize> {
        self.extras
            .iter()
            .position(|e| e == name)
            .map(|p| self.n_z + self.n_w + p)
    }

    pub fn indices_of(&self, block: Block) -> std::ops::Range<usize> {
        match block {
            Block::Z => 0..self.n_z,
            Block::W => self.n_z..self.n_z + self.n_w,
            Block::Extra => self.n_z + self.n_w..self.len(),
        }
    }

    /// Canonical serialization name: `z3`, `w3`, or the auxiliary name.
    pub fn name(&self, idx: usize) -> String {
        match self.block_of(idx) {
            Block::Z => format!("z{}", idx + 1),
            Block::W => format!("w{}", idx - self.n_z + 1),
            Block::Extra => self.extras[idx - self.n_z - self.n_w].clone(),
        }
    }

    /// Human-facing name: the display name of a z-variable, `~name` for its
    /// conjugate.
    pub fn display_name(&self, idx: usize) -> String {
        match self.block_of(idx) {
            Block::Z => self.z_display[idx].clone(),
            Block::W => format!("~{}", self.z_display[idx - self.n_z]),
            Block::Extra => self.extras[idx - self.n_z - self.n_w].clone(),
        }
    }

    /// Variable priority of the canonical (storage and printing) order.
    pub fn canonical_priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn z_display(&self) -> &[String] {
        &self.z_display
    }

    /// Display names differ from the canonical `z1..zN`.
    pub fn has_custom_names(&self) -> bool {
        self.z_display
            .iter()
            .enumerate()
            .any(|(k, d)| *d != format!("z{}", k + 1))
    }

    /// Resolves a variable token. `conj` is set when the token was written
    /// with a leading `~`.
    pub fn lookup(&self, name: &str, conj: bool) -> Option<usize> {
        // display names shadow canonical ones (a context may display z0..z3)
        let plain = self
            .z_display
            .iter()
            .position(|d| d == name)
            .or_else(|| parse_canonical_z(name, self.n_z));
        if let Some(k) = plain {
            return if conj {
                self.has_w().then(|| self.n_z + k)
            } else {
                Some(k)
            };
        }
        if conj {
            return None;
        }
        if self.has_w() {
            if let Some(rest) = name.strip_prefix('w') {
                if let Ok(k) = rest.parse::<usize>() {
                    if k >= 1 && k <= self.n_w && !rest.starts_with('0') {
                        return Some(self.n_z + k - 1);
                    }
                }
            }
        }
        self.extra_index(name)
    }

    /// Same context with additional auxiliary variables appended.
    pub fn with_extras(&self, more: &[&str]) -> Result<Arc<Self>> {
        let mut extras = self.extras.clone();
        extras.extend(more.iter().map(|s| s.to_string()));
        VarContext::new(self.n_z, self.has_w(), self.z_display.clone(), extras)
    }

    /// Same z-block and extras, without the w-block.
    pub fn without_w(&self) -> Arc<Self> {
        Arc::new(Self::build(
            self.n_z,
            false,
            self.z_display.clone(),
            self.extras.clone(),
        ))
    }

    /// Same z-block and extras, with a w-block.
    pub fn with_w(&self) -> Arc<Self> {
        Arc::new(Self::build(
            self.n_z,
            true,
            self.z_display.clone(),
            self.extras.clone(),
        ))
    }

    /// Same z-block (and w-block), no extras.
    pub fn without_extras(&self) -> Arc<Self> {
        Arc::new(Self::build(
            self.n_z,
            self.has_w(),
            self.z_display.clone(),
            Vec::new(),
        ))
    }

    pub fn check_same(&self, other: &VarContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_canonical_z(name: &str, n_z: usize) -> Option<usize> {
    let rest = name.strip_prefix('z')?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let k: usize = rest.parse().ok()?;
    (k >= 1 && k <= n_z).then(|| k - 1)
}

fn parse_canonical(name: &str, n_z: usize, n_w: usize) -> Option<usize> {
    if let Some(k) = parse_canonical_z(name, n_z) {
        return Some(k);
    }
    let rest = name.strip_prefix('w')?;
    let k: usize = rest.parse().ok()?;
    (k >= 1 && k <= n_w).then(|| n_z + k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_names() {
        let ctx = VarContext::zw(3).with_extras(&["c"]).unwrap();
        assert_eq!(ctx.len(), 7);
        assert_eq!(ctx.name(0), "z1");
        assert_eq!(ctx.name(4), "w2");
        assert_eq!(ctx.name(6), "c");
        assert_eq!(ctx.lookup("z3", true), Some(5));
        assert_eq!(ctx.lookup("w3", false), Some(5));
        assert_eq!(ctx.lookup("c", false), Some(6));
        assert_eq!(ctx.lookup("z4", false), None);
        assert_eq!(ctx.lookup("z01", false), None);
    }

    #[test]
    fn no_w_lookup_in_z_only() {
        let ctx = VarContext::z_only(2);
        assert_eq!(ctx.lookup("z1", true), None);
        assert_eq!(ctx.lookup("w1", false), None);
    }

    #[test]
    fn display_names() {
        let ctx = VarContext::new(1, true, vec!["u".into()], vec![]).unwrap();
        assert_eq!(ctx.lookup("u", false), Some(0));
        assert_eq!(ctx.lookup("u", true), Some(1));
        assert_eq!(ctx.display_name(1), "~u");
        assert_eq!(ctx.name(1), "w1");
    }

    #[test]
    fn rejects_colliding_extras() {
        assert!(VarContext::zw(2).with_extras(&["z1"]).is_err());
        assert!(VarContext::zw(2).with_extras(&["i"]).is_err());
        assert!(VarContext::zw(2).with_extras(&["c", "c"]).is_err());
    }
}
