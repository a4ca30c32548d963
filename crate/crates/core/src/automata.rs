//! Two-action Tsetlin automaton with `2N` states.
//!
//! States `1..=N` select [`Action::Exclude`], states `N+1..=2N` select
//! [`Action::Include`]. A reward pushes the state deeper into the current
//! action's half; a penalty pushes it toward the boundary and across it.

use rand::Rng;

use crate::error::{Error, Result};

/// Default automaton half-size `N`.
pub const DEFAULT_HALF_SIZE: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Exclude,
    Include
}

/// How a fresh automaton picks its first state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitPolicy {
    /// State `N`, the shallowest Exclude state.
    BoundaryExclude,
    /// State `N + 1`, the shallowest Include state.
    BoundaryInclude,
    /// Uniform over `1..=2N`.
    UniformRandom,
    /// Uniform over `{N, N + 1}`.
    #[default]
    FiftyFifty
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Automaton {
    state: u32,
    half:  u32
}

impl Automaton {
    pub fn new<R: Rng + ?Sized>(half: u32, policy: InitPolicy, rng: &mut R) -> Result<Self> {
        if half == 0 {
            return Err(Error::InvalidParameter("automaton half-size N must be at least 1".into()));
        }
        let state = match policy {
            InitPolicy::BoundaryExclude => half,
            InitPolicy::BoundaryInclude => half + 1,
            InitPolicy::UniformRandom => rng.random_range(1..=2 * half),
            InitPolicy::FiftyFifty => {
                if rng.random::<bool>() {
                    half + 1
                } else {
                    half
                }
            }
        };
        Ok(Self { state, half })
    }

    /// Builds an automaton at an explicit state.
    pub fn with_state(half: u32, state: u32) -> Result<Self> {
        if half == 0 {
            return Err(Error::InvalidParameter("automaton half-size N must be at least 1".into()));
        }
        if !(1..=2 * half).contains(&state) {
            return Err(Error::InvalidParameter(format!(
                "state {state} outside 1..={} for N = {half}",
                2 * half
            )));
        }
        Ok(Self { state, half })
    }

    #[inline]
    pub fn state(&self) -> u32 {
        self.state
    }

    #[inline]
    pub fn half_size(&self) -> u32 {
        self.half
    }

    #[inline]
    pub fn action(&self) -> Action {
        if self.state > self.half {
            Action::Include
        } else {
            Action::Exclude
        }
    }

    #[inline]
    pub fn is_included(&self) -> bool {
        self.state > self.half
    }

    /// Moves one state deeper into the current action, saturating at 1 and `2N`.
    #[inline]
    pub fn reward(&mut self) {
        if self.state > self.half {
            if self.state < 2 * self.half {
                self.state += 1;
            }
        } else if self.state > 1 {
            self.state -= 1;
        }
    }

    /// Moves one state toward the other action; crosses the boundary from `N` or `N + 1`.
    #[inline]
    pub fn penalize(&mut self) {
        if self.state > self.half {
            self.state -= 1;
        } else {
            self.state += 1;
        }
    }

    /// Increments the state, clipped at `2N`.
    #[inline]
    pub fn increment(&mut self) {
        if self.state < 2 * self.half {
            self.state += 1;
        }
    }

    /// Decrements the state, clipped at 1.
    #[inline]
    pub fn decrement(&mut self) {
        if self.state > 1 {
            self.state -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn at(half: u32, state: u32) -> Automaton {
        Automaton::with_state(half, state).unwrap()
    }

    #[test]
    fn init_policies() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(Automaton::new(3, InitPolicy::BoundaryExclude, &mut rng).unwrap().state(), 3);
        assert_eq!(Automaton::new(3, InitPolicy::BoundaryInclude, &mut rng).unwrap().state(), 4);
        let mut seen = [false; 2];
        for _ in 0..200 {
            let s = Automaton::new(3, InitPolicy::FiftyFifty, &mut rng).unwrap().state();
            assert!(s == 3 || s == 4);
            seen[(s - 3) as usize] = true;
        }
        assert_eq!(seen, [true, true]);
        for _ in 0..200 {
            let s = Automaton::new(1, InitPolicy::UniformRandom, &mut rng).unwrap().state();
            assert!(s == 1 || s == 2);
        }
    }

    #[test]
    fn zero_half_size_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            Automaton::new(0, InitPolicy::FiftyFifty, &mut rng),
            Err(Error::InvalidParameter(_))
        ));
        assert!(Automaton::with_state(3, 7).is_err());
        assert!(Automaton::with_state(3, 0).is_err());
    }

    #[test]
    fn action_regions() {
        assert_eq!(at(3, 3).action(), Action::Exclude);
        assert_eq!(at(3, 4).action(), Action::Include);
        assert_eq!(at(1, 2).action(), Action::Include);
        assert_eq!(at(1, 1).action(), Action::Exclude);
    }

    #[test]
    fn reward_examples() {
        let mut a = at(3, 3);
        a.reward();
        assert_eq!(a.state(), 2);
        let mut a = at(3, 1);
        a.reward();
        assert_eq!(a.state(), 1);
        let mut a = at(3, 6);
        a.reward();
        assert_eq!(a.state(), 6);
    }

    #[test]
    fn penalty_examples() {
        let mut a = at(3, 3);
        a.penalize();
        assert_eq!((a.state(), a.action()), (4, Action::Include));
        let mut a = at(3, 4);
        a.penalize();
        assert_eq!((a.state(), a.action()), (3, Action::Exclude));
        let mut a = at(3, 1);
        a.penalize();
        assert_eq!(a.state(), 2);
    }

    #[test]
    fn repeated_penalty_crosses_then_oscillates() {
        for half in 1..6 {
            let mut a = at(half, 1);
            for _ in 0..half {
                a.penalize();
            }
            assert_eq!(a.state(), half + 1);
            a.penalize();
            assert_eq!(a.state(), half);
        }
    }

    #[test]
    fn alternating_reinforcement_reaches_the_top() {
        // penalize while excluded, reward while included: 2N - 1 steps from 1 to 2N
        for half in 1..8 {
            let mut a = at(half, 1);
            for _ in 0..(2 * half - 1) {
                match a.action() {
                    Action::Exclude => a.penalize(),
                    Action::Include => a.reward()
                }
            }
            assert_eq!(a.state(), 2 * half);
        }
    }

    #[test]
    fn reward_fixed_points() {
        for half in 1..6 {
            for s in 1..=2 * half {
                let mut a = at(half, s);
                a.reward();
                assert_eq!(a.state() == s, s == 1 || s == 2 * half, "N={half} s={s}");
            }
        }
    }

    proptest! {
        #[test]
        fn transitions_stay_in_range(half in 1u32..20, start in 0u32..40, ops in proptest::collection::vec(any::<bool>(), 0..200)) {
            let mut a = at(half, 1 + start % (2 * half));
            for reward in ops {
                let before = a;
                if reward {
                    a.reward();
                    prop_assert_eq!(a.action(), before.action());
                } else {
                    a.penalize();
                    let boundary = before.state() == half || before.state() == half + 1;
                    prop_assert_eq!(a.action() != before.action(), boundary);
                }
                prop_assert!((1..=2 * half).contains(&a.state()));
                prop_assert_eq!(a.half_size(), half);
            }
        }
    }
}
