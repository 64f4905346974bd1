//! Bit-exact encoding and decoding of cluster control messages.
//!
//! Every message is a 6-byte header (type, version, length; all big-endian
//! 16-bit fields) followed by a sequence of TLV components, each framed as
//! 16-bit type, 16-bit length, body. `length` in the header counts the body
//! only, never the header itself. Unknown component types are skipped and
//! counted so an older decoder tolerates a newer sender.

use std::fmt;
use std::net::Ipv4Addr;

use thiserror::Error;

/// Protocol version carried in every header.
pub const WIRE_VERSION: u16 = 1;
/// Fixed size of the message header in bytes.
pub const HEADER_LEN: usize = 6;
/// Upper bound on the opaque replicated-state blob.
pub const MAX_OPAQUE_LEN: usize = 1024;

// Message type codes.
pub const CLUSTER_KEEPALIVE: u16 = 1;
pub const CLUSTER_REPLICATION: u16 = 4;
pub const ELECTION_REQUEST: u16 = 7;
pub const ELECTION_RESPONSE: u16 = 8;
pub const FORCE_SECONDARY: u16 = 9;
pub const FORCED_LEAVE: u16 = 10;
pub const OWNER_QUERY: u16 = 11;
pub const OWNER_REPLY: u16 = 12;
pub const STATE_UPDATE: u16 = 13;
pub const CCL_PING: u16 = 14;
pub const CCL_PONG: u16 = 15;
pub const CONFIG_SYNC: u16 = 17;

// Component type codes (TLVs inside a message body).
pub const SELECTION_INFO_COMP: u16 = 2;
pub const RADIO_INFO_COMP: u16 = 3;
pub const IP_LAYER_CONN_INFO: u16 = 5;
pub const UPPER_LAYER_CONN_INFO: u16 = 6;
pub const OWNER_INFO_COMP: u16 = 16;
pub const CLUSTER_CONFIG_COMP: u16 = 18;
pub const ECHO_DATA_COMP: u16 = 19;
pub const IFACE_STATUS_COMP: u16 = 20;

/// Validation failure while building wire bytes.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("field {field} out of range: {detail}")]
    FieldOutOfRange {
        field: &'static str,
        detail: String,
    },
}

/// Typed decode failure. The decoder never panics on arbitrary input.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("buffer truncated: need {needed} bytes, have {have}")]
    Truncated { needed: usize, have: usize },
    #[error("unsupported version {0} (expected {WIRE_VERSION})")]
    BadVersion(u16),
    #[error("header length {declared} does not match body length {actual}")]
    LengthMismatch { declared: usize, actual: usize },
    #[error("unknown message type {0}")]
    UnknownMessageType(u16),
    #[error("component {comp} missing from {msg} body")]
    MissingComponent {
        msg: &'static str,
        comp: &'static str,
    },
    #[error("unit priority {0} outside 1-100")]
    PriorityOutOfRange(u8),
    #[error("field {field} has invalid enum value {value}")]
    BadEnum { field: &'static str, value: u8 },
    #[error("serial number contains non-printable bytes")]
    BadSerial,
    #[error("snr {0} centi-dB outside plausible range")]
    SnrOutOfRange(i16),
    #[error("opaque state of {0} bytes exceeds cap {MAX_OPAQUE_LEN}")]
    OversizeOpaque(usize),
    #[error("malformed {0} component")]
    MalformedComponent(&'static str),
}

/// Unit serial number: 16 printable ASCII bytes, space-padded on the right.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SerialNumber([u8; 16]);

impl SerialNumber {
    pub fn new(s: &str) -> Result<Self, EncodeError> {
        let bytes = s.as_bytes();
        if bytes.len() > 16 || bytes.iter().any(|&b| !(0x20..=0x7e).contains(&b)) {
            return Err(EncodeError::FieldOutOfRange {
                field: "serial_number",
                detail: format!("{s:?} is not a printable string of at most 16 bytes"),
            });
        }
        let mut buf = [b' '; 16];
        buf[..bytes.len()].copy_from_slice(bytes);
        Ok(Self(buf))
    }

    pub fn from_wire(raw: [u8; 16]) -> Result<Self, DecodeError> {
        if raw.iter().any(|&b| !(0x20..=0x7e).contains(&b)) {
            return Err(DecodeError::BadSerial);
        }
        Ok(Self(raw))
    }

    pub fn as_bytes(&self) -> &[u8; 16] {
        &self.0
    }

    /// The serial without trailing pad spaces.
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).unwrap().trim_end_matches(' ')
    }
}

impl fmt::Display for SerialNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for SerialNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SerialNumber({:?})", self.as_str())
    }
}

/// Role advertised inside a selection-info component. Only the designated
/// standby distinguishes itself; the primary and plain members both send
/// `Secondary` (the primary is identified by behavior, not by this field).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireRole {
    PrimaryStandby,
    Secondary,
}

impl WireRole {
    fn code(self) -> u8 {
        match self {
            WireRole::PrimaryStandby => 1,
            WireRole::Secondary => 2,
        }
    }

    fn from_code(v: u8) -> Result<Self, DecodeError> {
        match v {
            1 => Ok(WireRole::PrimaryStandby),
            2 => Ok(WireRole::Secondary),
            other => Err(DecodeError::BadEnum {
                field: "role",
                value: other,
            }),
        }
    }
}

/// Cluster interface mode. All admitted members must agree on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceMode {
    SpannedEtherChannel,
    Individual,
}

impl InterfaceMode {
    fn code(self) -> u8 {
        match self {
            InterfaceMode::SpannedEtherChannel => 1,
            InterfaceMode::Individual => 2,
        }
    }

    fn from_code(v: u8) -> Result<Self, DecodeError> {
        match v {
            1 => Ok(InterfaceMode::SpannedEtherChannel),
            2 => Ok(InterfaceMode::Individual),
            other => Err(DecodeError::BadEnum {
                field: "mode",
                value: other,
            }),
        }
    }
}

impl fmt::Display for InterfaceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterfaceMode::SpannedEtherChannel => f.write_str("spanned-etherchannel"),
            InterfaceMode::Individual => f.write_str("individual"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadioType {
    AccessPoint,
    Station,
}

impl RadioType {
    fn code(self) -> u8 {
        match self {
            RadioType::AccessPoint => 1,
            RadioType::Station => 2,
        }
    }

    fn from_code(v: u8) -> Result<Self, DecodeError> {
        match v {
            1 => Ok(RadioType::AccessPoint),
            2 => Ok(RadioType::Station),
            other => Err(DecodeError::BadEnum {
                field: "radio_type",
                value: other,
            }),
        }
    }
}

/// Selection-info component: the fields the election comparator consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionInfo {
    /// 1 is the highest priority; valid range 1-100.
    pub priority: u8,
    pub serial: SerialNumber,
    pub role: WireRole,
}

/// Radio-info component: link mode and per-link balancing inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadioInfo {
    pub mode: InterfaceMode,
    pub radio_type: RadioType,
    /// Signed fixed-point dB, scaled by 100 (36.00 dB encodes as 3600).
    pub snr_centi_db: i16,
    pub load_balancing_weight: u16,
}

/// IP-layer half of a replicated connection: enough to steer a failover
/// without opening the rest of the packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IpLayerConnInfo {
    pub src_ip: Ipv4Addr,
    pub dst_ip: Ipv4Addr,
    pub protocol: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcpState {
    SynSent,
    Established,
    FinWait,
    Closed,
    NotApplicable,
}

impl TcpState {
    fn code(self) -> u8 {
        match self {
            TcpState::SynSent => 1,
            TcpState::Established => 2,
            TcpState::FinWait => 3,
            TcpState::Closed => 4,
            TcpState::NotApplicable => 5,
        }
    }

    fn from_code(v: u8) -> Result<Self, DecodeError> {
        match v {
            1 => Ok(TcpState::SynSent),
            2 => Ok(TcpState::Established),
            3 => Ok(TcpState::FinWait),
            4 => Ok(TcpState::Closed),
            5 => Ok(TcpState::NotApplicable),
            other => Err(DecodeError::BadEnum {
                field: "tcp_state",
                value: other,
            }),
        }
    }
}

impl fmt::Display for TcpState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TcpState::SynSent => "syn-sent",
            TcpState::Established => "established",
            TcpState::FinWait => "fin-wait",
            TcpState::Closed => "closed",
            TcpState::NotApplicable => "n/a",
        };
        f.write_str(s)
    }
}

/// Upper-layer half of a replicated connection, including the opaque blob
/// that houses the preserved extra state (uptime, ARP, MAC table, identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperLayerConnInfo {
    pub src_port: u16,
    pub dst_port: u16,
    pub tcp_state: TcpState,
    pub seq_num: u32,
    pub ack_num: u32,
    pub opaque_state: Vec<u8>,
}

/// Echo payload carried by CCL ping/pong so round trips correlate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EchoData {
    pub sent_at_us: u64,
    pub probe_seq: u32,
}

/// One monitored interface's health as reported inside a keepalive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IfaceStatus {
    pub name: String,
    /// 1 = spanned-EtherChannel member, 2 = EtherChannel member,
    /// 3 = non-EtherChannel.
    pub kind: u8,
    pub up: bool,
    pub monitored: bool,
    /// Microsecond timestamp of the last down transition; meaningful only
    /// while `up` is false.
    pub down_since_us: u64,
}

/// Mirrored cluster configuration as replicated from the primary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterConfigWire {
    pub version: u32,
    pub cluster_name: String,
    pub ccl_interface: String,
    pub mgmt_interfaces: Vec<String>,
    pub data_interfaces: Vec<String>,
    pub ip_pool: Vec<Ipv4Addr>,
    pub main_cluster_ip: Ipv4Addr,
    /// Interface role mapping mirrored member-to-member ("data0" -> "inside").
    pub iface_roles: Vec<(String, String)>,
}

/// A decoded cluster message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterMessage {
    Keepalive {
        selection: SelectionInfo,
        radio: RadioInfo,
        ifaces: Vec<IfaceStatus>,
    },
    ElectionRequest {
        selection: SelectionInfo,
    },
    ElectionResponse {
        selection: SelectionInfo,
    },
    ForceSecondary {
        selection: SelectionInfo,
    },
    ForcedLeave {
        selection: SelectionInfo,
    },
    Replication {
        ip: IpLayerConnInfo,
        upper: Option<UpperLayerConnInfo>,
        owner: Option<SerialNumber>,
    },
    OwnerQuery {
        ip: IpLayerConnInfo,
        upper: UpperLayerConnInfo,
    },
    OwnerReply {
        ip: IpLayerConnInfo,
        upper: Option<UpperLayerConnInfo>,
        /// Absent when the queried unit does not know the flow.
        owner: Option<SerialNumber>,
    },
    StateUpdate {
        ip: IpLayerConnInfo,
        upper: UpperLayerConnInfo,
        owner: SerialNumber,
    },
    ConfigSync {
        config: ClusterConfigWire,
    },
    Ping {
        echo: EchoData,
    },
    Pong {
        echo: EchoData,
    },
}

impl ClusterMessage {
    pub fn msg_type(&self) -> u16 {
        match self {
            ClusterMessage::Keepalive { .. } => CLUSTER_KEEPALIVE,
            ClusterMessage::ElectionRequest { .. } => ELECTION_REQUEST,
            ClusterMessage::ElectionResponse { .. } => ELECTION_RESPONSE,
            ClusterMessage::ForceSecondary { .. } => FORCE_SECONDARY,
            ClusterMessage::ForcedLeave { .. } => FORCED_LEAVE,
            ClusterMessage::Replication { .. } => CLUSTER_REPLICATION,
            ClusterMessage::OwnerQuery { .. } => OWNER_QUERY,
            ClusterMessage::OwnerReply { .. } => OWNER_REPLY,
            ClusterMessage::StateUpdate { .. } => STATE_UPDATE,
            ClusterMessage::ConfigSync { .. } => CONFIG_SYNC,
            ClusterMessage::Ping { .. } => CCL_PING,
            ClusterMessage::Pong { .. } => CCL_PONG,
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            ClusterMessage::Keepalive { .. } => "keepalive",
            ClusterMessage::ElectionRequest { .. } => "election-request",
            ClusterMessage::ElectionResponse { .. } => "election-response",
            ClusterMessage::ForceSecondary { .. } => "force-secondary",
            ClusterMessage::ForcedLeave { .. } => "forced-leave",
            ClusterMessage::Replication { .. } => "replication",
            ClusterMessage::OwnerQuery { .. } => "owner-query",
            ClusterMessage::OwnerReply { .. } => "owner-reply",
            ClusterMessage::StateUpdate { .. } => "state-update",
            ClusterMessage::ConfigSync { .. } => "config-sync",
            ClusterMessage::Ping { .. } => "ccl-ping",
            ClusterMessage::Pong { .. } => "ccl-pong",
        }
    }
}

/// Result of a successful decode, with the forward-compatibility counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub msg: ClusterMessage,
    /// TLV components whose type was unknown and got skipped.
    pub unknown_components: u32,
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

fn put_u16(buf: &mut Vec<u8>, v: u16) {
    buf.extend_from_slice(&v.to_be_bytes());
}

fn put_u32(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_be_bytes());
}

fn put_u64(buf: &mut Vec<u8>, v: u64) {
    buf.extend_from_slice(&v.to_be_bytes());
}

fn put_short_str(buf: &mut Vec<u8>, field: &'static str, s: &str) -> Result<(), EncodeError> {
    if s.len() > 255 {
        return Err(EncodeError::FieldOutOfRange {
            field,
            detail: format!("string of {} bytes exceeds 255", s.len()),
        });
    }
    buf.push(s.len() as u8);
    buf.extend_from_slice(s.as_bytes());
    Ok(())
}

fn put_tlv(buf: &mut Vec<u8>, comp_type: u16, body: &[u8]) {
    put_u16(buf, comp_type);
    put_u16(buf, body.len() as u16);
    buf.extend_from_slice(body);
}

fn encode_selection(info: &SelectionInfo) -> Result<Vec<u8>, EncodeError> {
    if !(1..=100).contains(&info.priority) {
        return Err(EncodeError::FieldOutOfRange {
            field: "unit_priority",
            detail: format!("{} outside 1-100", info.priority),
        });
    }
    let mut body = Vec::with_capacity(18);
    body.push(info.priority);
    body.extend_from_slice(info.serial.as_bytes());
    body.push(info.role.code());
    Ok(body)
}

fn encode_radio(info: &RadioInfo) -> Result<Vec<u8>, EncodeError> {
    if !(-10_000..=10_000).contains(&info.snr_centi_db) {
        return Err(EncodeError::FieldOutOfRange {
            field: "snr",
            detail: format!("{} centi-dB outside [-10000, 10000]", info.snr_centi_db),
        });
    }
    let mut body = Vec::with_capacity(6);
    body.push(info.mode.code());
    body.push(info.radio_type.code());
    body.extend_from_slice(&info.snr_centi_db.to_be_bytes());
    body.extend_from_slice(&info.load_balancing_weight.to_be_bytes());
    Ok(body)
}

fn encode_ip_layer(info: &IpLayerConnInfo) -> Vec<u8> {
    let mut body = Vec::with_capacity(9);
    body.extend_from_slice(&info.src_ip.octets());
    body.extend_from_slice(&info.dst_ip.octets());
    body.push(info.protocol);
    body
}

fn encode_upper_layer(info: &UpperLayerConnInfo) -> Result<Vec<u8>, EncodeError> {
    if info.opaque_state.len() > MAX_OPAQUE_LEN {
        return Err(EncodeError::FieldOutOfRange {
            field: "opaque_state",
            detail: format!("{} bytes exceeds cap {MAX_OPAQUE_LEN}", info.opaque_state.len()),
        });
    }
    let mut body = Vec::with_capacity(15 + info.opaque_state.len());
    put_u16(&mut body, info.src_port);
    put_u16(&mut body, info.dst_port);
    body.push(info.tcp_state.code());
    put_u32(&mut body, info.seq_num);
    put_u32(&mut body, info.ack_num);
    put_u16(&mut body, info.opaque_state.len() as u16);
    body.extend_from_slice(&info.opaque_state);
    Ok(body)
}

fn encode_echo(echo: &EchoData) -> Vec<u8> {
    let mut body = Vec::with_capacity(12);
    put_u64(&mut body, echo.sent_at_us);
    put_u32(&mut body, echo.probe_seq);
    body
}

fn encode_iface_status(st: &IfaceStatus) -> Result<Vec<u8>, EncodeError> {
    let mut body = Vec::new();
    put_short_str(&mut body, "iface_name", &st.name)?;
    body.push(st.kind);
    body.push(u8::from(st.up) | (u8::from(st.monitored) << 1));
    put_u64(&mut body, st.down_since_us);
    Ok(body)
}

fn encode_cluster_config(cfg: &ClusterConfigWire) -> Result<Vec<u8>, EncodeError> {
    let mut body = Vec::new();
    put_u32(&mut body, cfg.version);
    put_short_str(&mut body, "cluster_name", &cfg.cluster_name)?;
    put_short_str(&mut body, "ccl_interface", &cfg.ccl_interface)?;
    for (field, list) in [
        ("mgmt_interfaces", &cfg.mgmt_interfaces),
        ("data_interfaces", &cfg.data_interfaces),
    ] {
        if list.len() > 255 {
            return Err(EncodeError::FieldOutOfRange {
                field,
                detail: "more than 255 entries".into(),
            });
        }
        body.push(list.len() as u8);
        for name in list {
            put_short_str(&mut body, field, name)?;
        }
    }
    if cfg.ip_pool.len() > 255 {
        return Err(EncodeError::FieldOutOfRange {
            field: "ip_pool",
            detail: "more than 255 entries".into(),
        });
    }
    body.push(cfg.ip_pool.len() as u8);
    for ip in &cfg.ip_pool {
        body.extend_from_slice(&ip.octets());
    }
    body.extend_from_slice(&cfg.main_cluster_ip.octets());
    if cfg.iface_roles.len() > 255 {
        return Err(EncodeError::FieldOutOfRange {
            field: "iface_roles",
            detail: "more than 255 entries".into(),
        });
    }
    body.push(cfg.iface_roles.len() as u8);
    for (iface, role) in &cfg.iface_roles {
        put_short_str(&mut body, "iface_roles", iface)?;
        put_short_str(&mut body, "iface_roles", role)?;
    }
    Ok(body)
}

/// Encode a message into its canonical wire bytes. The header length is
/// always recomputed from the encoded body, never trusted from input.
pub fn encode(msg: &ClusterMessage) -> Result<Vec<u8>, EncodeError> {
    let mut body = Vec::new();
    match msg {
        ClusterMessage::Keepalive {
            selection,
            radio,
            ifaces,
        } => {
            put_tlv(&mut body, SELECTION_INFO_COMP, &encode_selection(selection)?);
            put_tlv(&mut body, RADIO_INFO_COMP, &encode_radio(radio)?);
            for st in ifaces {
                put_tlv(&mut body, IFACE_STATUS_COMP, &encode_iface_status(st)?);
            }
        }
        ClusterMessage::ElectionRequest { selection }
        | ClusterMessage::ElectionResponse { selection }
        | ClusterMessage::ForceSecondary { selection }
        | ClusterMessage::ForcedLeave { selection } => {
            put_tlv(&mut body, SELECTION_INFO_COMP, &encode_selection(selection)?);
        }
        ClusterMessage::Replication { ip, upper, owner } => {
            put_tlv(&mut body, IP_LAYER_CONN_INFO, &encode_ip_layer(ip));
            if let Some(upper) = upper {
                put_tlv(&mut body, UPPER_LAYER_CONN_INFO, &encode_upper_layer(upper)?);
            }
            if let Some(owner) = owner {
                put_tlv(&mut body, OWNER_INFO_COMP, owner.as_bytes());
            }
        }
        ClusterMessage::OwnerQuery { ip, upper } => {
            put_tlv(&mut body, IP_LAYER_CONN_INFO, &encode_ip_layer(ip));
            put_tlv(&mut body, UPPER_LAYER_CONN_INFO, &encode_upper_layer(upper)?);
        }
        ClusterMessage::OwnerReply { ip, upper, owner } => {
            put_tlv(&mut body, IP_LAYER_CONN_INFO, &encode_ip_layer(ip));
            if let Some(upper) = upper {
                put_tlv(&mut body, UPPER_LAYER_CONN_INFO, &encode_upper_layer(upper)?);
            }
            if let Some(owner) = owner {
                put_tlv(&mut body, OWNER_INFO_COMP, owner.as_bytes());
            }
        }
        ClusterMessage::StateUpdate { ip, upper, owner } => {
            put_tlv(&mut body, IP_LAYER_CONN_INFO, &encode_ip_layer(ip));
            put_tlv(&mut body, UPPER_LAYER_CONN_INFO, &encode_upper_layer(upper)?);
            put_tlv(&mut body, OWNER_INFO_COMP, owner.as_bytes());
        }
        ClusterMessage::ConfigSync { config } => {
            put_tlv(&mut body, CLUSTER_CONFIG_COMP, &encode_cluster_config(config)?);
        }
        ClusterMessage::Ping { echo } | ClusterMessage::Pong { echo } => {
            put_tlv(&mut body, ECHO_DATA_COMP, &encode_echo(echo));
        }
    }
    if body.len() > u16::MAX as usize {
        return Err(EncodeError::FieldOutOfRange {
            field: "body",
            detail: format!("{} bytes exceeds 16-bit length", body.len()),
        });
    }
    let mut out = Vec::with_capacity(HEADER_LEN + body.len());
    put_u16(&mut out, msg.msg_type());
    put_u16(&mut out, WIRE_VERSION);
    put_u16(&mut out, body.len() as u16);
    out.extend_from_slice(&body);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

/// Bounded cursor over a byte slice; every read is length-checked.
struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.remaining() < n {
            return Err(DecodeError::Truncated {
                needed: n,
                have: self.remaining(),
            });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        let s = self.take(2)?;
        Ok(u16::from_be_bytes([s[0], s[1]]))
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        let s = self.take(4)?;
        Ok(u32::from_be_bytes([s[0], s[1], s[2], s[3]]))
    }

    fn u64(&mut self) -> Result<u64, DecodeError> {
        let s = self.take(8)?;
        let mut b = [0u8; 8];
        b.copy_from_slice(s);
        Ok(u64::from_be_bytes(b))
    }

    fn ipv4(&mut self) -> Result<Ipv4Addr, DecodeError> {
        let s = self.take(4)?;
        Ok(Ipv4Addr::new(s[0], s[1], s[2], s[3]))
    }

    fn short_str(&mut self, comp: &'static str) -> Result<String, DecodeError> {
        let len = self.u8()? as usize;
        let raw = self.take(len)?;
        String::from_utf8(raw.to_vec()).map_err(|_| DecodeError::MalformedComponent(comp))
    }
}

fn decode_selection(body: &[u8]) -> Result<SelectionInfo, DecodeError> {
    let mut c = Cursor::new(body);
    let priority = c.u8()?;
    if !(1..=100).contains(&priority) {
        return Err(DecodeError::PriorityOutOfRange(priority));
    }
    let mut raw = [0u8; 16];
    raw.copy_from_slice(c.take(16)?);
    let serial = SerialNumber::from_wire(raw)?;
    let role = WireRole::from_code(c.u8()?)?;
    if c.remaining() != 0 {
        return Err(DecodeError::MalformedComponent("selection-info"));
    }
    Ok(SelectionInfo {
        priority,
        serial,
        role,
    })
}

fn decode_radio(body: &[u8]) -> Result<RadioInfo, DecodeError> {
    let mut c = Cursor::new(body);
    let mode = InterfaceMode::from_code(c.u8()?)?;
    let radio_type = RadioType::from_code(c.u8()?)?;
    let snr = c.u16()? as i16;
    if !(-10_000..=10_000).contains(&snr) {
        return Err(DecodeError::SnrOutOfRange(snr));
    }
    let weight = c.u16()?;
    if c.remaining() != 0 {
        return Err(DecodeError::MalformedComponent("radio-info"));
    }
    Ok(RadioInfo {
        mode,
        radio_type,
        snr_centi_db: snr,
        load_balancing_weight: weight,
    })
}

fn decode_ip_layer(body: &[u8]) -> Result<IpLayerConnInfo, DecodeError> {
    let mut c = Cursor::new(body);
    let src_ip = c.ipv4()?;
    let dst_ip = c.ipv4()?;
    let protocol = c.u8()?;
    if c.remaining() != 0 {
        return Err(DecodeError::MalformedComponent("ip-layer-conn-info"));
    }
    Ok(IpLayerConnInfo {
        src_ip,
        dst_ip,
        protocol,
    })
}

fn decode_upper_layer(body: &[u8]) -> Result<UpperLayerConnInfo, DecodeError> {
    let mut c = Cursor::new(body);
    let src_port = c.u16()?;
    let dst_port = c.u16()?;
    let tcp_state = TcpState::from_code(c.u8()?)?;
    let seq_num = c.u32()?;
    let ack_num = c.u32()?;
    let opaque_len = c.u16()? as usize;
    if opaque_len > MAX_OPAQUE_LEN {
        return Err(DecodeError::OversizeOpaque(opaque_len));
    }
    let opaque_state = c.take(opaque_len)?.to_vec();
    if c.remaining() != 0 {
        return Err(DecodeError::MalformedComponent("upper-layer-conn-info"));
    }
    Ok(UpperLayerConnInfo {
        src_port,
        dst_port,
        tcp_state,
        seq_num,
        ack_num,
        opaque_state,
    })
}

fn decode_owner(body: &[u8]) -> Result<SerialNumber, DecodeError> {
    if body.len() != 16 {
        return Err(DecodeError::MalformedComponent("owner-info"));
    }
    let mut raw = [0u8; 16];
    raw.copy_from_slice(body);
    SerialNumber::from_wire(raw)
}

fn decode_echo(body: &[u8]) -> Result<EchoData, DecodeError> {
    let mut c = Cursor::new(body);
    let sent_at_us = c.u64()?;
    let probe_seq = c.u32()?;
    if c.remaining() != 0 {
        return Err(DecodeError::MalformedComponent("echo-data"));
    }
    Ok(EchoData {
        sent_at_us,
        probe_seq,
    })
}

fn decode_iface_status(body: &[u8]) -> Result<IfaceStatus, DecodeError> {
    let mut c = Cursor::new(body);
    let name = c.short_str("iface-status")?;
    let kind = c.u8()?;
    let flags = c.u8()?;
    let down_since_us = c.u64()?;
    if c.remaining() != 0 {
        return Err(DecodeError::MalformedComponent("iface-status"));
    }
    Ok(IfaceStatus {
        name,
        kind,
        up: flags & 1 != 0,
        monitored: flags & 2 != 0,
        down_since_us,
    })
}

fn decode_cluster_config(body: &[u8]) -> Result<ClusterConfigWire, DecodeError> {
    let mut c = Cursor::new(body);
    let version = c.u32()?;
    let cluster_name = c.short_str("cluster-config")?;
    let ccl_interface = c.short_str("cluster-config")?;
    let mut mgmt_interfaces = Vec::new();
    for _ in 0..c.u8()? {
        mgmt_interfaces.push(c.short_str("cluster-config")?);
    }
    let mut data_interfaces = Vec::new();
    for _ in 0..c.u8()? {
        data_interfaces.push(c.short_str("cluster-config")?);
    }
    let mut ip_pool = Vec::new();
    for _ in 0..c.u8()? {
        ip_pool.push(c.ipv4()?);
    }
    let main_cluster_ip = c.ipv4()?;
    let mut iface_roles = Vec::new();
    for _ in 0..c.u8()? {
        let iface = c.short_str("cluster-config")?;
        let role = c.short_str("cluster-config")?;
        iface_roles.push((iface, role));
    }
    if c.remaining() != 0 {
        return Err(DecodeError::MalformedComponent("cluster-config"));
    }
    Ok(ClusterConfigWire {
        version,
        cluster_name,
        ccl_interface,
        mgmt_interfaces,
        data_interfaces,
        ip_pool,
        main_cluster_ip,
        iface_roles,
    })
}

/// Accumulated TLVs of one message body.
#[derive(Default)]
struct Components {
    selection: Option<SelectionInfo>,
    radio: Option<RadioInfo>,
    ip: Option<IpLayerConnInfo>,
    upper: Option<UpperLayerConnInfo>,
    owner: Option<SerialNumber>,
    echo: Option<EchoData>,
    config: Option<ClusterConfigWire>,
    ifaces: Vec<IfaceStatus>,
    unknown: u32,
}

fn parse_components(body: &[u8]) -> Result<Components, DecodeError> {
    let mut comps = Components::default();
    let mut c = Cursor::new(body);
    while c.remaining() > 0 {
        let comp_type = c.u16()?;
        let comp_len = c.u16()? as usize;
        let comp_body = c.take(comp_len)?;
        match comp_type {
            SELECTION_INFO_COMP => comps.selection = Some(decode_selection(comp_body)?),
            RADIO_INFO_COMP => comps.radio = Some(decode_radio(comp_body)?),
            IP_LAYER_CONN_INFO => comps.ip = Some(decode_ip_layer(comp_body)?),
            UPPER_LAYER_CONN_INFO => comps.upper = Some(decode_upper_layer(comp_body)?),
            OWNER_INFO_COMP => comps.owner = Some(decode_owner(comp_body)?),
            ECHO_DATA_COMP => comps.echo = Some(decode_echo(comp_body)?),
            CLUSTER_CONFIG_COMP => comps.config = Some(decode_cluster_config(comp_body)?),
            IFACE_STATUS_COMP => comps.ifaces.push(decode_iface_status(comp_body)?),
            _ => comps.unknown += 1,
        }
    }
    Ok(comps)
}

fn require<T>(
    v: Option<T>,
    msg: &'static str,
    comp: &'static str,
) -> Result<T, DecodeError> {
    v.ok_or(DecodeError::MissingComponent { msg, comp })
}

/// Decode wire bytes into a validated message. The decoder never reads past
/// the header-declared length and returns a typed error on any malformation.
pub fn decode(bytes: &[u8]) -> Result<Decoded, DecodeError> {
    let mut c = Cursor::new(bytes);
    let msg_type = c.u16()?;
    let version = c.u16()?;
    if version != WIRE_VERSION {
        return Err(DecodeError::BadVersion(version));
    }
    let declared = c.u16()? as usize;
    let actual = c.remaining();
    if actual < declared {
        return Err(DecodeError::Truncated {
            needed: declared,
            have: actual,
        });
    }
    if actual > declared {
        return Err(DecodeError::LengthMismatch { declared, actual });
    }
    let body = c.take(declared)?;
    let comps = parse_components(body)?;
    let unknown_components = comps.unknown;
    let msg = match msg_type {
        CLUSTER_KEEPALIVE => ClusterMessage::Keepalive {
            selection: require(comps.selection, "keepalive", "selection-info")?,
            radio: require(comps.radio, "keepalive", "radio-info")?,
            ifaces: comps.ifaces,
        },
        ELECTION_REQUEST => ClusterMessage::ElectionRequest {
            selection: require(comps.selection, "election-request", "selection-info")?,
        },
        ELECTION_RESPONSE => ClusterMessage::ElectionResponse {
            selection: require(comps.selection, "election-response", "selection-info")?,
        },
        FORCE_SECONDARY => ClusterMessage::ForceSecondary {
            selection: require(comps.selection, "force-secondary", "selection-info")?,
        },
        FORCED_LEAVE => ClusterMessage::ForcedLeave {
            selection: require(comps.selection, "forced-leave", "selection-info")?,
        },
        CLUSTER_REPLICATION => ClusterMessage::Replication {
            ip: require(comps.ip, "replication", "ip-layer-conn-info")?,
            upper: comps.upper,
            owner: comps.owner,
        },
        OWNER_QUERY => ClusterMessage::OwnerQuery {
            ip: require(comps.ip, "owner-query", "ip-layer-conn-info")?,
            upper: require(comps.upper, "owner-query", "upper-layer-conn-info")?,
        },
        OWNER_REPLY => ClusterMessage::OwnerReply {
            ip: require(comps.ip, "owner-reply", "ip-layer-conn-info")?,
            upper: comps.upper,
            owner: comps.owner,
        },
        STATE_UPDATE => ClusterMessage::StateUpdate {
            ip: require(comps.ip, "state-update", "ip-layer-conn-info")?,
            upper: require(comps.upper, "state-update", "upper-layer-conn-info")?,
            owner: require(comps.owner, "state-update", "owner-info")?,
        },
        CONFIG_SYNC => ClusterMessage::ConfigSync {
            config: require(comps.config, "config-sync", "cluster-config")?,
        },
        CCL_PING => ClusterMessage::Ping {
            echo: require(comps.echo, "ccl-ping", "echo-data")?,
        },
        CCL_PONG => ClusterMessage::Pong {
            echo: require(comps.echo, "ccl-pong", "echo-data")?,
        },
        other => return Err(DecodeError::UnknownMessageType(other)),
    };
    Ok(Decoded {
        msg,
        unknown_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_selection() -> SelectionInfo {
        SelectionInfo {
            priority: 1,
            serial: SerialNumber::new("SN001").unwrap(),
            role: WireRole::Secondary,
        }
    }

    fn sample_keepalive() -> ClusterMessage {
        ClusterMessage::Keepalive {
            selection: sample_selection(),
            radio: RadioInfo {
                mode: InterfaceMode::SpannedEtherChannel,
                radio_type: RadioType::AccessPoint,
                snr_centi_db: 3600,
                load_balancing_weight: 1,
            },
            ifaces: Vec::new(),
        }
    }

    #[test]
    fn keepalive_matches_golden_vector() {
        let hex = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/testdata/wire/keepalive_basic.hex"
        ))
        .unwrap();
        let golden: Vec<u8> = hex
            .split_whitespace()
            .map(|b| u8::from_str_radix(b, 16).unwrap())
            .collect();
        let encoded = encode(&sample_keepalive()).unwrap();
        assert_eq!(encoded, golden);
        let decoded = decode(&golden).unwrap();
        assert_eq!(decoded.msg, sample_keepalive());
        assert_eq!(decoded.unknown_components, 0);
    }

    #[test]
    fn keepalive_has_two_components_and_honest_length() {
        let bytes = encode(&sample_keepalive()).unwrap();
        // Header: type 1, version 1, length = body.
        assert_eq!(u16::from_be_bytes([bytes[0], bytes[1]]), CLUSTER_KEEPALIVE);
        assert_eq!(u16::from_be_bytes([bytes[2], bytes[3]]), WIRE_VERSION);
        let declared = u16::from_be_bytes([bytes[4], bytes[5]]) as usize;
        assert_eq!(declared, bytes.len() - HEADER_LEN);
        // Exactly the selection-info and radio-info TLVs.
        assert_eq!(u16::from_be_bytes([bytes[6], bytes[7]]), SELECTION_INFO_COMP);
        let first_len = u16::from_be_bytes([bytes[8], bytes[9]]) as usize;
        assert_eq!(first_len, 18);
        let second_at = HEADER_LEN + 4 + first_len;
        assert_eq!(
            u16::from_be_bytes([bytes[second_at], bytes[second_at + 1]]),
            RADIO_INFO_COMP
        );
    }

    #[test]
    fn empty_buffer_is_truncated() {
        assert!(matches!(
            decode(&[]),
            Err(DecodeError::Truncated { .. })
        ));
    }

    #[test]
    fn version_two_rejected() {
        let mut bytes = encode(&sample_keepalive()).unwrap();
        bytes[3] = 2;
        assert_eq!(decode(&bytes), Err(DecodeError::BadVersion(2)));
    }

    #[test]
    fn unknown_component_skipped_and_counted() {
        let mut bytes = encode(&sample_keepalive()).unwrap();
        // Append a synthetic TLV of unknown type 999 and patch the header length.
        let extra: &[u8] = &[0x03, 0xe7, 0x00, 0x02, 0xde, 0xad];
        bytes.extend_from_slice(extra);
        let new_len = (bytes.len() - HEADER_LEN) as u16;
        bytes[4..6].copy_from_slice(&new_len.to_be_bytes());
        let decoded = decode(&bytes).unwrap();
        assert_eq!(decoded.unknown_components, 1);
        assert_eq!(decoded.msg, sample_keepalive());
    }

    #[test]
    fn trailing_garbage_is_length_mismatch() {
        let mut bytes = encode(&sample_keepalive()).unwrap();
        bytes.push(0xff);
        assert!(matches!(
            decode(&bytes),
            Err(DecodeError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn priority_zero_rejected() {
        let mut bytes = encode(&sample_keepalive()).unwrap();
        bytes[10] = 0; // priority byte of the selection-info TLV
        assert_eq!(decode(&bytes), Err(DecodeError::PriorityOutOfRange(0)));
        let bad = SelectionInfo {
            priority: 0,
            ..sample_selection()
        };
        assert!(encode(&ClusterMessage::ElectionRequest { selection: bad }).is_err());
    }

    #[test]
    fn oversize_opaque_rejected_on_encode() {
        let msg = ClusterMessage::StateUpdate {
            ip: IpLayerConnInfo {
                src_ip: Ipv4Addr::new(10, 0, 0, 1),
                dst_ip: Ipv4Addr::new(10, 0, 0, 2),
                protocol: 6,
            },
            upper: UpperLayerConnInfo {
                src_port: 1,
                dst_port: 2,
                tcp_state: TcpState::Established,
                seq_num: 0,
                ack_num: 0,
                opaque_state: vec![0u8; MAX_OPAQUE_LEN + 1],
            },
            owner: SerialNumber::new("X").unwrap(),
        };
        assert!(encode(&msg).is_err());
    }

    #[test]
    fn serial_padding_round_trips() {
        let s = SerialNumber::new("AB-12").unwrap();
        assert_eq!(s.as_bytes().len(), 16);
        assert_eq!(s.as_str(), "AB-12");
        assert_eq!(s.to_string(), "AB-12");
        assert!(SerialNumber::new("seventeen-chars-x").is_err());
    }
}
