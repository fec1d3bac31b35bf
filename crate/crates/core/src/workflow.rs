//! The identification algebra of multi-valued data processing.
//!
//! A [`TupleState`] tracks the identifiers of a tuple (or map) of values
//! together with the running product of every step applied so far and an
//! audit history. Three products always agree: the process (steps as
//! given), the data (slot elements, left to right) and the history.
//!
//! Positions are 1-based throughout, matching removal identifiers such as
//! `δ₂` for the second value.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::codec::{self, Reserved, MAX_THETA};
use crate::error::{Error, Result};
use crate::group::{ElementClass, GroupParams, UtElement};

/// Category of an identifiable object.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Value,
    Function,
    Removal,
    Reserved,
}

impl Role {
    /// Functions that create or replace values must be order-sensitive.
    pub fn admits(self, class: ElementClass) -> bool {
        match self {
            Role::Function | Role::Removal | Role::Reserved => class == ElementClass::Ordered,
            Role::Value => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Value,
    /// Stands for a value removed by index or name; has no content.
    Placeholder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub element: UtElement,
    pub kind: SlotKind,
    /// Map key, for entries inserted with [`TupleState::insert_entry`].
    pub name: Option<String>,
    /// Opaque content reference (typically a content digest).
    pub content: Option<String>,
}

impl Slot {
    fn value(element: UtElement) -> Self {
        Slot {
            element,
            kind: SlotKind::Value,
            name: None,
            content: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HistoryEntry {
    Single(UtElement),
    /// Pairwise-commuting elements; their product ignores order.
    CommutingSet(Vec<UtElement>),
    /// Ordered sub-steps of one composite operation.
    Composite(Vec<UtElement>),
}

impl HistoryEntry {
    pub fn members(&self) -> &[UtElement] {
        match self {
            HistoryEntry::Single(e) => std::slice::from_ref(e),
            HistoryEntry::CommutingSet(v) | HistoryEntry::Composite(v) => v,
        }
    }

    pub fn product(&self, params: GroupParams) -> UtElement {
        self.members()
            .iter()
            .fold(UtElement::identity(params), |acc, e| acc.mul_unchecked(e))
    }

    fn render(&self, out: &mut String, name: &impl Fn(&UtElement) -> String) {
        let list = |v: &[UtElement]| v.iter().map(name).collect::<Vec<_>>().join(",");
        match self {
            HistoryEntry::Single(e) => out.push_str(&name(e)),
            HistoryEntry::CommutingSet(v) => {
                let _ = write!(out, "{{{}}}", list(v));
            }
            HistoryEntry::Composite(v) => {
                let _ = write!(out, "<{}>", list(v));
            }
        }
    }
}

/// An identified multi-valued data object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleState {
    params: GroupParams,
    slots: Vec<Slot>,
    product: UtElement,
    history: Vec<HistoryEntry>,
    tuple_removal: bool,
    auditable: bool,
    insert_run: bool,
}

impl TupleState {
    pub fn new(params: GroupParams) -> Self {
        TupleState {
            params,
            slots: Vec::new(),
            product: UtElement::identity(params),
            history: Vec::new(),
            tuple_removal: false,
            auditable: true,
            insert_run: false,
        }
    }

    /// Enables removal by identity and by index, which depend on how values
    /// happen to be ordered and are therefore off by default.
    pub fn with_tuple_removal(mut self, enabled: bool) -> Self {
        self.tuple_removal = enabled;
        self
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn elements(&self) -> Vec<UtElement> {
        self.slots.iter().map(|s| s.element).collect()
    }

    pub fn product(&self) -> UtElement {
        self.product
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    /// False once a value was removed by identity away from the right end;
    /// the history then no longer replays chronologically.
    pub fn is_auditable(&self) -> bool {
        self.auditable
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot_product(&self) -> UtElement {
        product_of(self.params, self.slots.iter().map(|s| &s.element))
    }

    pub fn history_product(&self) -> UtElement {
        self.history
            .iter()
            .fold(UtElement::identity(self.params), |acc, h| {
                acc.mul_unchecked(&h.product(self.params))
            })
    }

    /// History as `<{x,y},<g,h>,w>`, naming elements with `name`.
    pub fn render_history(&self, name: impl Fn(&UtElement) -> String) -> String {
        let mut out = String::from("<");
        for (i, h) in self.history.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            h.render(&mut out, &name);
        }
        out.push('>');
        out
    }

    fn check(&self, e: &UtElement) -> Result<()> {
        if e.params() != self.params {
            return Err(Error::VersionMismatch(self.params.name(), e.params().name()));
        }
        Ok(())
    }

    fn check_function(&self, f: &UtElement) -> Result<()> {
        self.check(f)?;
        let class = f.classify();
        if !Role::Function.admits(class) {
            return Err(Error::NotAFunction(class.to_string()));
        }
        Ok(())
    }

    fn position(&self, position: usize) -> Result<usize> {
        if position == 0 || position > self.slots.len() {
            return Err(Error::BadPosition {
                position,
                len: self.slots.len(),
            });
        }
        Ok(position - 1)
    }

    fn push_history(&mut self, entry: HistoryEntry) {
        self.history.push(entry);
        self.insert_run = false;
    }

    /// Appends a value at the right end.
    pub fn insert_value(&self, x: UtElement) -> Result<TupleState> {
        self.insert_slot(Slot::value(x))
    }

    pub fn insert_value_with_content(
        &self,
        x: UtElement,
        content: impl Into<String>,
    ) -> Result<TupleState> {
        let mut slot = Slot::value(x);
        slot.content = Some(content.into());
        self.insert_slot(slot)
    }

    /// Inserts the map entry `key → x`; see [`map_entry`].
    pub fn insert_entry(&self, key: &str, x: UtElement) -> Result<TupleState> {
        self.check(&x)?;
        if self.slots.iter().any(|s| s.name.as_deref() == Some(key)) {
            return Err(Error::InvalidToken(format!("duplicate key {key:?}")));
        }
        let mut slot = Slot::value(map_entry(key, &x)?);
        slot.name = Some(key.to_owned());
        self.insert_slot(slot)
    }

    fn insert_slot(&self, slot: Slot) -> Result<TupleState> {
        let x = slot.element;
        self.check(&x)?;
        let mut next = self.clone();
        next.slots.push(slot);
        next.product = self.product.mul_unchecked(&x);
        // Consecutive inserts that commute with each other collapse into a
        // single unordered history entry.
        let merged = match next.history.last_mut() {
            Some(last) if self.insert_run
                && last.members().iter().all(|m| m.commutes_unchecked(&x)) => {
                    let mut members = last.members().to_vec();
                    members.push(x);
                    *last = HistoryEntry::CommutingSet(members);
                    true
                }
            _ => false,
        };
        if !merged {
            next.history.push(HistoryEntry::Single(x));
        }
        next.insert_run = true;
        Ok(next)
    }

    /// Applies a function `f` returning `k` new values, which are placed to
    /// the left of the existing ones.
    pub fn create_values(&self, f: UtElement, k: usize) -> Result<TupleState> {
        self.check_function(&f)?;
        let v = self.product;
        let x = v.mul_unchecked(&f).mul_unchecked(&v.inverse());
        let created = factorize(x, k)?;
        let mut next = self.clone();
        next.slots = created
            .into_iter()
            .map(Slot::value)
            .chain(self.slots.iter().cloned())
            .collect();
        next.product = v.mul_unchecked(&f);
        next.push_history(HistoryEntry::Single(f));
        Ok(next)
    }

    /// Applies `f`, which replaces the values at `replaced` (1-based) and
    /// creates `k_new` more. Replaced and created values go to the left of
    /// the unchanged ones.
    pub fn substitute(&self, f: UtElement, replaced: &[usize], k_new: usize) -> Result<TupleState> {
        self.check_function(&f)?;
        let mut gone = vec![false; self.slots.len()];
        for &pos in replaced {
            let i = self.position(pos)?;
            if std::mem::replace(&mut gone[i], true) {
                return Err(Error::BadPosition {
                    position: pos,
                    len: self.slots.len(),
                });
            }
        }
        let kept: Vec<Slot> = self
            .slots
            .iter()
            .zip(&gone)
            .filter(|(_, &g)| !g)
            .map(|(s, _)| s.clone())
            .collect();
        let w = product_of(self.params, kept.iter().map(|s| &s.element));
        let x = self
            .product
            .mul_unchecked(&f)
            .mul_unchecked(&w.inverse());
        let factors = factorize(x, k_new + replaced.len())?;
        let mut next = self.clone();
        next.slots = factors.into_iter().map(Slot::value).chain(kept).collect();
        next.product = self.product.mul_unchecked(&f);
        next.push_history(HistoryEntry::Single(f));
        Ok(next)
    }

    /// Applies `f` to the whole tuple, replacing every value by `k` outputs.
    pub fn apply_function(&self, f: UtElement, k: usize) -> Result<TupleState> {
        self.check_function(&f)?;
        let x = self.product.mul_unchecked(&f);
        let mut next = self.clone();
        next.slots = factorize(x, k)?.into_iter().map(Slot::value).collect();
        next.product = x;
        next.push_history(HistoryEntry::Single(f));
        Ok(next)
    }

    /// Removes the value at `position` by operating its inverse, together
    /// with removing and reinserting everything to its right.
    ///
    /// Returns the new state and the process steps that realize it:
    /// `[(y·s)⁻¹, s₁, …, sₙ]` for target `y` and suffix `s = s₁⋯sₙ`.
    pub fn remove_by_identity(&self, position: usize) -> Result<(TupleState, Vec<UtElement>)> {
        if !self.tuple_removal {
            return Err(Error::RemovalDisabled);
        }
        let i = self.position(position)?;
        let suffix: Vec<UtElement> = self.slots[i + 1..].iter().map(|s| s.element).collect();
        let target_and_suffix = product_of(self.params, self.slots[i..].iter().map(|s| &s.element));
        let mut steps = vec![target_and_suffix.inverse()];
        steps.extend(suffix.iter().copied());

        let mut next = self.clone();
        next.slots.remove(i);
        next.product = steps
            .iter()
            .fold(self.product, |acc, s| acc.mul_unchecked(s));
        if !suffix.is_empty() {
            next.auditable = false;
        }
        next.push_history(HistoryEntry::Composite(steps.clone()));
        Ok((next, steps))
    }

    /// Removes the value at `position` through the removal identifier
    /// `δ_position`, leaving a placeholder. Returns the new state and `δ`.
    pub fn remove_by_index(&self, position: usize) -> Result<(TupleState, UtElement)> {
        if !self.tuple_removal {
            return Err(Error::RemovalDisabled);
        }
        let i = self.position(position)?;
        let delta = codec::reserved(&Reserved::RemovalIndex(position as u64), self.params)?;
        Ok((self.place_holder(i, delta), delta))
    }

    /// Removes the map entry named `name` through `δ_name`, leaving a
    /// placeholder. Returns the new state and `δ`.
    pub fn remove_by_name(&self, name: &str) -> Result<(TupleState, UtElement)> {
        let i = self
            .slots
            .iter()
            .position(|s| s.kind == SlotKind::Value && s.name.as_deref() == Some(name))
            .ok_or_else(|| Error::UnknownName(name.to_owned()))?;
        let delta = codec::reserved(&Reserved::RemovalName(name.to_owned()), self.params)?;
        Ok((self.place_holder(i, delta), delta))
    }

    /// Replaces slot `i` by `ẙ = y·s·δ·s⁻¹`, where `s` is the product of the
    /// slots to its right, so that the slot product equals `product·δ`.
    /// For the rightmost slot this is `y·δ`.
    fn place_holder(&self, i: usize, delta: UtElement) -> TupleState {
        let suffix = product_of(self.params, self.slots[i + 1..].iter().map(|s| &s.element));
        let y = self.slots[i].element;
        let hole = y
            .mul_unchecked(&suffix)
            .mul_unchecked(&delta)
            .mul_unchecked(&suffix.inverse());
        let mut next = self.clone();
        next.slots[i] = Slot {
            element: hole,
            kind: SlotKind::Placeholder,
            name: None,
            content: None,
        };
        next.product = self.product.mul_unchecked(&delta);
        next.push_history(HistoryEntry::Single(delta));
        next
    }
}

fn product_of<'a>(
    params: GroupParams,
    elements: impl IntoIterator<Item = &'a UtElement>,
) -> UtElement {
    elements
        .into_iter()
        .fold(UtElement::identity(params), |acc, e| acc.mul_unchecked(e))
}

/// Splits `x` into `k` factors whose left-to-right product is `x`:
/// `x_{i+1} = x·θ_i` for `i < k−1`, and the last factor closes the product.
pub fn factorize(x: UtElement, k: usize) -> Result<Vec<UtElement>> {
    if k == 0 {
        return Err(Error::InvalidArity(0));
    }
    if k - 1 > MAX_THETA + 1 {
        return Err(Error::ThetaExhausted(k - 2));
    }
    let params = x.params();
    let mut factors = Vec::with_capacity(k);
    let mut head = UtElement::identity(params);
    for i in 0..k - 1 {
        let theta = codec::reserved(&Reserved::Theta(i), params)?;
        let xi = x.mul_unchecked(&theta);
        head = head.mul_unchecked(&xi);
        factors.push(xi);
    }
    factors.push(head.inverse().mul_unchecked(&x));
    Ok(factors)
}

/// Identifier of the map entry `key → x`.
///
/// Value and key are lifted into a non-commutative subgroup, combined there
/// and brought back into the Abelian subgroup: entries commute with each
/// other while the key stays bound to its value.
pub fn map_entry(key: &str, x: &UtElement) -> Result<UtElement> {
    let class = x.classify();
    if !class.is_commuting() {
        return Err(Error::NotAValue(class.to_string()));
    }
    let k = key_binder(key, x.params())?;
    Ok(x.lift().mul_unchecked(&k.lift()).unlift())
}

/// The key element with `e24` replaced by the sum of its four cells.
///
/// Inside the lifted subgroup the only non-commuting term of
/// `lift(x)·lift(k)` is `x.e23 · k.e24`. Short keys convert to elements with
/// `e24 = 0`, so without the fold they would not bind to their values. The
/// fold is invertible, so distinct keys keep distinct binders.
pub fn key_binder(key: &str, params: GroupParams) -> Result<UtElement> {
    let k = codec::key_element(key, params)?;
    let [e12, e13, e14, e23, e24, e34] = k.cells();
    let p = params.p() as u128;
    let folded = (e13 as u128 + e14 as u128 + e23 as u128 + e24 as u128) % p;
    UtElement::from_cells(params, [e12, e13, e14, e23, folded as u64, e34])
}

/// Identifier of a nested map with content product `inner` under `key`.
pub fn nested_map_element(inner: &UtElement, key: &str) -> Result<UtElement> {
    let k = codec::key_element(key, inner.params())?;
    Ok(inner.lift().mul_unchecked(&k.lift()).unlift())
}

/// Left-to-right composition of function identifiers.
pub fn compose(params: GroupParams, fs: &[UtElement]) -> Result<UtElement> {
    UtElement::product(params, fs)
}

/// Adaptor for a dynamic function `f` that internally applied `applied`:
/// `(∏ applied)⁻¹·f`, so that `x·applied…·adaptor = x·f`.
pub fn adaptor(f: &UtElement, applied: &[UtElement]) -> Result<UtElement> {
    let prefix = UtElement::product(f.params(), applied)?;
    prefix.inverse().multiply(f)
}

/// A set expression over identifiers: `+` is union, `×` is the Cartesian
/// product read as concatenation of expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpression {
    Leaf(Vec<UtElement>),
    Union(Box<SetExpression>, Box<SetExpression>),
    Concat(Box<SetExpression>, Box<SetExpression>),
}

impl SetExpression {
    pub fn leaf(elements: impl IntoIterator<Item = UtElement>) -> Self {
        SetExpression::Leaf(elements.into_iter().collect())
    }

    pub fn union(self, other: SetExpression) -> Self {
        SetExpression::Union(Box::new(self), Box::new(other))
    }

    pub fn concat(self, other: SetExpression) -> Self {
        SetExpression::Concat(Box::new(self), Box::new(other))
    }

    /// Evaluates to the distinct resulting identifiers, sorted by rank.
    pub fn expand(&self) -> Result<Vec<UtElement>> {
        let set = self.expand_map()?;
        Ok(set.into_values().collect())
    }

    fn expand_map(&self) -> Result<BTreeMap<num_bigint::BigUint, UtElement>> {
        Ok(match self {
            SetExpression::Leaf(v) => v.iter().map(|e| (e.rank(), *e)).collect(),
            SetExpression::Union(a, b) => {
                let (mut out, b) = (a.expand_map()?, b.expand_map()?);
                if let (Some(x), Some(y)) = (out.values().next(), b.values().next()) {
                    x.multiply(y)?;
                }
                out.extend(b);
                out
            }
            SetExpression::Concat(a, b) => {
                let (a, b) = (a.expand_map()?, b.expand_map()?);
                let mut out = BTreeMap::new();
                for x in a.values() {
                    for y in b.values() {
                        let e = x.multiply(y)?;
                        out.insert(e.rank(), e);
                    }
                }
                out
            }
        })
    }
}

/// True iff the process steps, the slot elements and the history all
/// multiply to the state's product.
pub fn verify_three_way(state: &TupleState, process: &[UtElement]) -> bool {
    let Ok(from_process) = UtElement::product(state.params, process) else {
        return false;
    };
    from_process == state.product
        && state.slot_product() == state.product
        && state.history_product() == state.product
}
