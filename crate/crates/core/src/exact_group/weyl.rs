use num_traits::One;

use super::gsp::GSpElement;
use super::matrix::ExactMatrix4;
use super::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum WeylTag {
    Id,
    S1,
    S2,
    S1S2,
    S2S1,
    S1S2S1,
    S2S1S2,
    J,
}

impl WeylTag {
    pub const ALL: [WeylTag; 8] = [
        WeylTag::Id,
        WeylTag::S1,
        WeylTag::S2,
        WeylTag::S1S2,
        WeylTag::S2S1,
        WeylTag::S1S2S1,
        WeylTag::S2S1S2,
        WeylTag::J,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WeylTag::Id => "1",
            WeylTag::S1 => "s1",
            WeylTag::S2 => "s2",
            WeylTag::S1S2 => "s1s2",
            WeylTag::S2S1 => "s2s1",
            WeylTag::S1S2S1 => "s1s2s1",
            WeylTag::S2S1S2 => "s2s1s2",
            WeylTag::J => "J",
        }
    }

    pub fn parse(s: &str) -> Option<WeylTag> {
        WeylTag::ALL.into_iter().find(|w| w.name().eq_ignore_ascii_case(s))
    }

    pub fn rows(self) -> [[i64; 4]; 4] {
        match self {
            WeylTag::Id => [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            WeylTag::S1 => [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
            WeylTag::S2 => [[0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1]],
            WeylTag::S1S2 => [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0]],
            WeylTag::S2S1 => [[0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0]],
            WeylTag::S1S2S1 => [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]],
            WeylTag::S2S1S2 => [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
            WeylTag::J => [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]],
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeylElem {
    pub tag: WeylTag,
    pub element: GSpElement,
}

impl WeylElem {
    pub fn new(tag: WeylTag) -> Self {
        let m = ExactMatrix4::from_ints(tag.rows());
        WeylElem { tag, element: GSpElement::new_unchecked(m, Q::one()) }
    }

    pub fn matrix(&self) -> &ExactMatrix4 {
        self.element.matrix()
    }

    pub fn all() -> Vec<WeylElem> {
        WeylTag::ALL.into_iter().map(WeylElem::new).collect()
    }
}
