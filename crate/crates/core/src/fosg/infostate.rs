//! Information states and their canonical keys.
//!
//! Keys are length-prefixed concatenations of the recorded components, so
//! equal keys imply equal sequences and the encoding is stable across runs
//! and platforms.

use super::Seat;

/// Appends one length-prefixed component to a key.
fn push_prefixed(key: &mut String, component: &str) {
    key.push_str(&component.len().to_string());
    key.push(':');
    key.push_str(component);
}

/// One element of an information state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfoEntry {
    /// An observation: the public component plus this seat's private component.
    Obs { public: String, private: String },
    /// An action taken by the seat itself, recorded by label.
    OwnAction { label: String },
}

/// The information state of one seat: everything it has observed and done,
/// in order, plus the canonical key encoding that sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infostate {
    seat: Seat,
    entries: Vec<InfoEntry>,
    key: String,
}

impl Infostate {
    /// An empty infostate for `seat` at the start of the game.
    pub fn new(seat: Seat) -> Self {
        Infostate {
            seat,
            entries: Vec::new(),
            key: String::new(),
        }
    }

    pub fn seat(&self) -> Seat {
        self.seat
    }

    pub fn entries(&self) -> &[InfoEntry] {
        &self.entries
    }

    /// Canonical key; equal keys imply equal seats' observation sequences.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Number of observations recorded, which equals the number of game
    /// transitions so far.
    pub fn observations(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e, InfoEntry::Obs { .. }))
            .count()
    }

    /// Number of decisions this seat has taken, indexing lambda schedules.
    pub fn decisions(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e, InfoEntry::OwnAction { .. }))
            .count()
    }

    /// Records an observation (public and private components may be empty).
    pub fn push_obs(&mut self, public: &str, private: &str) {
        self.key.push('o');
        push_prefixed(&mut self.key, public);
        push_prefixed(&mut self.key, private);
        self.entries.push(InfoEntry::Obs {
            public: public.to_string(),
            private: private.to_string(),
        });
    }

    /// Records an action taken by this seat.
    pub fn push_own_action(&mut self, label: &str) {
        self.key.push('a');
        push_prefixed(&mut self.key, label);
        self.entries.push(InfoEntry::OwnAction {
            label: label.to_string(),
        });
    }

    /// Drops private components and own actions, leaving the sequence of
    /// public observations.
    pub fn public_projection(&self) -> PublicInfostate {
        let mut public = PublicInfostate::new();
        for entry in &self.entries {
            if let InfoEntry::Obs { public: p, .. } = entry {
                public.push_obs(p);
            }
        }
        public
    }
}

/// The common-knowledge information state: the sequence of public
/// observation components only.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PublicInfostate {
    entries: Vec<String>,
    key: String,
}

impl PublicInfostate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    /// Canonical key over public components.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Records the public component of one transition.
    pub fn push_obs(&mut self, public: &str) {
        self.key.push('o');
        push_prefixed(&mut self.key, public);
        self.entries.push(public.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_prefix_free_per_entry() {
        let mut a = Infostate::new(0);
        a.push_obs("x", "");
        a.push_obs("", "y");
        let mut b = Infostate::new(0);
        b.push_obs("x", "y");
        assert_ne!(a.key(), b.key());
    }

    #[test]
    fn empty_observation_still_extends_the_key() {
        let mut s = Infostate::new(1);
        let before = s.key().len();
        s.push_obs("", "");
        assert!(s.key().len() > before);
        assert_eq!(s.observations(), 1);
        assert_eq!(s.decisions(), 0);
    }

    #[test]
    fn own_actions_count_decisions() {
        let mut s = Infostate::new(0);
        s.push_obs("", "r1");
        s.push_own_action("bid:1x1");
        s.push_obs("b1x1", "");
        assert_eq!(s.decisions(), 1);
        assert_eq!(s.observations(), 2);
    }

    #[test]
    fn public_projection_keeps_public_components_in_order() {
        let mut s = Infostate::new(0);
        s.push_obs("", "secret");
        s.push_own_action("x");
        s.push_obs("pub1", "");
        s.push_obs("pub2", "more");
        let p = s.public_projection();
        assert_eq!(p.entries(), &["", "pub1", "pub2"]);
    }

    #[test]
    fn identical_sequences_give_identical_keys() {
        let build = || {
            let mut s = Infostate::new(0);
            s.push_obs("a", "b");
            s.push_own_action("m");
            s.push_obs("", "");
            s.key().to_string()
        };
        assert_eq!(build(), build());
    }

    use proptest::prelude::*;

    #[derive(Debug, Clone, PartialEq)]
    enum RawEntry {
        Obs(String, String),
        Act(String),
    }

    fn raw_entry() -> impl Strategy<Value = RawEntry> {
        let piece = "[a-z0-9:,.]{0,8}";
        prop_oneof![
            (piece, piece).prop_map(|(p, q)| RawEntry::Obs(p, q)),
            piece.prop_map(RawEntry::Act),
        ]
    }

    fn build(entries: &[RawEntry]) -> Infostate {
        let mut s = Infostate::new(0);
        for entry in entries {
            match entry {
                RawEntry::Obs(public, private) => s.push_obs(public, private),
                RawEntry::Act(label) => s.push_own_action(label),
            }
        }
        s
    }

    proptest! {
        /// A prefix of the entry sequence always yields a string prefix of
        /// the key; consistency walks rely on this to prune.
        #[test]
        fn sequence_prefixes_give_key_prefixes(
            entries in proptest::collection::vec(raw_entry(), 0..6),
            cut in 0usize..6,
        ) {
            let cut = cut.min(entries.len());
            let full = build(&entries);
            let prefix = build(&entries[..cut]);
            prop_assert!(full.key().starts_with(prefix.key()));
        }

        /// The converse: a key prefix can only come from a sequence prefix,
        /// and distinct sequences never collide, whatever the components
        /// contain.
        #[test]
        fn keys_decode_to_unique_sequences(
            a in proptest::collection::vec(raw_entry(), 0..5),
            b in proptest::collection::vec(raw_entry(), 0..5),
        ) {
            let ka = build(&a).key().to_string();
            let kb = build(&b).key().to_string();
            if a != b {
                prop_assert_ne!(&ka, &kb);
            }
            if ka.starts_with(&kb) {
                prop_assert!(b.len() <= a.len());
                prop_assert_eq!(&a[..b.len()], &b[..]);
            }
        }
    }
}
