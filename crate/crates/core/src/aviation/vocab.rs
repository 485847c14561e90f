//! Cockpit vocabulary and its rendering into atom names.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::formula::{AgentId, AtomId, Formula};

macro_rules! vocab_enum {
    ($(#[$m:meta])* $name:ident { $($v:ident),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub enum $name { $($v),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$v),+];

            pub fn name(self) -> &'static str {
                match self { $($name::$v => stringify!($v)),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                Self::ALL
                    .iter()
                    .copied()
                    .find(|v| v.name() == s)
                    .ok_or_else(|| format!("unknown {} `{s}`", stringify!($name)))
            }
        }
    };
}

vocab_enum!(Crew { Pilot, CoPilot, AutoPilot });

vocab_enum!(
    /// Control inputs. Facts about a configuration, not actions.
    Input {
        HardThrustPlus, ThrustPlus, HardNoseUp, NoseUp, HardWingLeft, WingLeft,
        HardThrustMinus, ThrustMinus, HardNoseDown, NoseDown, HardWingRight, WingRight,
    }
);

vocab_enum!(Side { Left, Middle, Right });

vocab_enum!(
    /// Discretised instrument readings.
    Reading {
        VertUp1, VertUp2, VertUp3, VertUp4,
        VertDown1, VertDown2, VertDown3, VertDown4,
        VertLevel, HorLeft1, HorLeft2, HorLeft3,
        HorRight1, HorRight2, HorRight3, HorLevel,
        AirspeedFast1, AirspeedFast2, AirspeedFast3,
        AirspeedSlow1, AirspeedSlow2, AirspeedSlow3,
        AirspeedCruise, AltCruise, AltClimb, AltDesc, AltLand,
    }
);

vocab_enum!(
    /// Flight control law.
    Mode { Normal, Alternate1, Alternate2 }
);

impl Crew {
    pub fn agent(self) -> AgentId {
        AgentId::new(self.name())
    }
}

impl Side {
    fn prefix(self) -> &'static str {
        match self {
            Side::Left => "InstrumentL",
            Side::Middle => "InstrumentM",
            Side::Right => "InstrumentR",
        }
    }
}

/// Mode plus one reading per side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GlobalReading {
    pub mode: Mode,
    pub left: Reading,
    pub middle: Reading,
    pub right: Reading,
}

impl GlobalReading {
    pub fn new(mode: Mode, left: Reading, middle: Reading, right: Reading) -> Self {
        Self {
            mode,
            left,
            middle,
            right,
        }
    }

    /// The four component facts, mode first.
    pub fn components(&self) -> [AviationAtom; 4] {
        [
            AviationAtom::ModeIs(self.mode),
            AviationAtom::InstrumentAt(Side::Left, self.left),
            AviationAtom::InstrumentAt(Side::Middle, self.middle),
            AviationAtom::InstrumentAt(Side::Right, self.right),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AviationAtom {
    ModeIs(Mode),
    InputIs(Input),
    InstrumentAt(Side, Reading),
    GlobalIs(GlobalReading),
}

impl AviationAtom {
    /// `M_Normal`, `Input_HardNoseUp`, `InstrumentL_VertUp1`,
    /// `Global_Normal_AirspeedCruise_AirspeedCruise_AirspeedCruise`.
    pub fn render(&self) -> AtomId {
        AtomId::new(match self {
            AviationAtom::ModeIs(m) => format!("M_{m}"),
            AviationAtom::InputIs(i) => format!("Input_{i}"),
            AviationAtom::InstrumentAt(s, r) => format!("{}_{r}", s.prefix()),
            AviationAtom::GlobalIs(g) => {
                format!("Global_{}_{}_{}_{}", g.mode, g.left, g.middle, g.right)
            }
        })
    }

    pub fn parse(s: &str) -> Option<AviationAtom> {
        let (head, rest) = s.split_once('_')?;
        match head {
            "M" => rest.parse().ok().map(AviationAtom::ModeIs),
            "Input" => rest.parse().ok().map(AviationAtom::InputIs),
            "InstrumentL" => rest.parse().ok().map(|r| AviationAtom::InstrumentAt(Side::Left, r)),
            "InstrumentM" => rest.parse().ok().map(|r| AviationAtom::InstrumentAt(Side::Middle, r)),
            "InstrumentR" => rest.parse().ok().map(|r| AviationAtom::InstrumentAt(Side::Right, r)),
            "Global" => {
                let parts: Vec<&str> = rest.split('_').collect();
                let [m, l, c, r] = parts[..] else {
                    return None;
                };
                Some(AviationAtom::GlobalIs(GlobalReading::new(
                    m.parse().ok()?,
                    l.parse().ok()?,
                    c.parse().ok()?,
                    r.parse().ok()?,
                )))
            }
            _ => None,
        }
    }

    pub fn formula(&self) -> Formula {
        Formula::Atom(self.render())
    }
}

impl fmt::Display for AviationAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Counts of each constant set: crew, inputs, sides, readings, modes.
pub fn cardinalities() -> [usize; 5] {
    [
        Crew::ALL.len(),
        Input::ALL.len(),
        Side::ALL.len(),
        Reading::ALL.len(),
        Mode::ALL.len(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(cardinalities(), [3, 12, 3, 27, 3]);
    }

    #[test]
    fn render_parse_round_trip() {
        let mut all = vec![];
        all.extend(Mode::ALL.iter().map(|&m| AviationAtom::ModeIs(m)));
        all.extend(Input::ALL.iter().map(|&i| AviationAtom::InputIs(i)));
        for &s in Side::ALL {
            all.extend(Reading::ALL.iter().map(|&r| AviationAtom::InstrumentAt(s, r)));
        }
        for &m in Mode::ALL {
            for &r in &Reading::ALL[..5] {
                all.push(AviationAtom::GlobalIs(GlobalReading::new(m, r, Reading::AltLand, r)));
            }
        }
        let mut names = std::collections::BTreeSet::new();
        for a in &all {
            assert_eq!(AviationAtom::parse(a.render().as_str()), Some(*a));
            assert!(names.insert(a.render()));
        }
        assert_eq!(AviationAtom::parse("Global_Normal_VertUp1"), None);
        assert_eq!(AviationAtom::parse("AT_On"), None);
    }
}
