use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::Position;

pub type Tags = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq)]
pub struct OsmNode {
    pub id: i64,
    pub position: Position,
    pub tags: Tags,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OsmWay {
    pub id: i64,
    pub nodes: Vec<i64>,
    pub tags: Tags,
}

impl OsmWay {
    pub fn is_closed(&self) -> bool {
        self.nodes.len() >= 4 && self.nodes.first() == self.nodes.last()
    }
}

/// Nodes and ways of an OSM XML file. Relations are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OsmDocument {
    pub nodes: BTreeMap<i64, OsmNode>,
    pub ways: BTreeMap<i64, OsmWay>,
}

/// Parses an OSM API v0.6 XML document.
pub fn parse_osm(bytes: &[u8]) -> Result<OsmDocument> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() as u32 + 1;
        Error::Xml {
            line,
            column: 0,
            message: "input is not valid UTF-8".into(),
        }
    })?;
    let xml = roxmltree::Document::parse(text).map_err(|e| {
        let pos = e.pos();
        Error::Xml {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })?;

    let root = xml.root_element();
    if root.tag_name().name() != "osm" {
        return Err(malformed(&xml, root, format!(
            "expected <osm> root, found <{}>",
            root.tag_name().name()
        )));
    }

    let mut doc = OsmDocument::default();
    for el in root.children().filter(|n| n.is_element()) {
        match el.tag_name().name() {
            "node" => {
                let id = int_attr(&xml, el, "id")?;
                let lat = float_attr(&xml, el, "lat")?;
                let lon = float_attr(&xml, el, "lon")?;
                let node = OsmNode {
                    id,
                    position: Position::new(lon, lat),
                    tags: read_tags(&xml, el)?,
                };
                if doc.nodes.insert(id, node).is_some() {
                    return Err(Error::Structural(format!("duplicate node id {id}")));
                }
            }
            "way" => {
                let id = int_attr(&xml, el, "id")?;
                let mut nodes = Vec::new();
                for nd in el.children().filter(|n| n.has_tag_name("nd")) {
                    nodes.push(int_attr(&xml, nd, "ref")?);
                }
                let way = OsmWay {
                    id,
                    nodes,
                    tags: read_tags(&xml, el)?,
                };
                if doc.ways.insert(id, way).is_some() {
                    return Err(Error::Structural(format!("duplicate way id {id}")));
                }
            }
            _ => {}
        }
    }

    for way in doc.ways.values() {
        let missing: BTreeSet<i64> = way
            .nodes
            .iter()
            .filter(|id| !doc.nodes.contains_key(id))
            .copied()
            .collect();
        if !missing.is_empty() {
            return Err(Error::DanglingNodeRefs {
                way: way.id,
                missing: missing.into_iter().collect(),
            });
        }
    }
    Ok(doc)
}

fn read_tags(xml: &roxmltree::Document, el: roxmltree::Node) -> Result<Tags> {
    let mut tags = Tags::new();
    for tag in el.children().filter(|n| n.has_tag_name("tag")) {
        let k = tag
            .attribute("k")
            .ok_or_else(|| malformed(xml, tag, "<tag> without k".into()))?;
        let v = tag
            .attribute("v")
            .ok_or_else(|| malformed(xml, tag, "<tag> without v".into()))?;
        tags.insert(k.to_string(), v.to_string());
    }
    Ok(tags)
}

fn attr<'a>(xml: &roxmltree::Document, el: roxmltree::Node<'a, 'a>, name: &str) -> Result<&'a str> {
    el.attribute(name).ok_or_else(|| {
        malformed(
            xml,
            el,
            format!("<{}> is missing attribute {name:?}", el.tag_name().name()),
        )
    })
}

fn int_attr(xml: &roxmltree::Document, el: roxmltree::Node, name: &str) -> Result<i64> {
    let raw = attr(xml, el, name)?;
    raw.trim()
        .parse()
        .map_err(|_| malformed(xml, el, format!("attribute {name}={raw:?} is not an integer")))
}

fn float_attr(xml: &roxmltree::Document, el: roxmltree::Node, name: &str) -> Result<f64> {
    let raw = attr(xml, el, name)?;
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| malformed(xml, el, format!("attribute {name}={raw:?} is not a number")))
}

fn malformed(xml: &roxmltree::Document, el: roxmltree::Node, message: String) -> Error {
    let pos = xml.text_pos_at(el.range().start);
    Error::Xml {
        line: pos.row,
        column: pos.col,
        message,
    }
}
