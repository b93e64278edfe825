//! Ranked message passing between sort processes.
//!
//! A [`TransportGroup`] owns one [`Endpoint`] per rank. Every ordered pair of
//! ranks has a reliable FIFO channel. Two implementations exist: an
//! in-process one built on channels and a TCP loopback mesh that pushes every
//! message through the wire format below.
//!
//! Wire format, all fields little-endian:
//!
//! ```text
//! +-----------+-------------+----------------------+
//! | kind: u32 | count: u64  | count x key: u64     |
//! +-----------+-------------+----------------------+
//! ```
//!
//! `kind` is 1 for `KEYS` and 2 for `DONE`.

use std::fmt;
use std::io::{self, Read, Write};
use std::net::{Ipv4Addr, SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::Arc;

use thiserror::Error;

use crate::item::Key;

pub const HEADER_LEN: usize = 12;
pub const DEFAULT_PORT_BASE: u16 = 45700;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(pub usize);

impl Rank {
    pub const MASTER: Rank = Rank(0);
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u32)]
pub enum MessageKind {
    Keys = 1,
    Done = 2,
}

impl TryFrom<u32> for MessageKind {
    type Error = TransportError;

    fn try_from(v: u32) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(MessageKind::Keys),
            2 => Ok(MessageKind::Done),
            other => Err(TransportError::UnknownKind(other)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub kind: MessageKind,
    pub payload: Vec<Key>,
}

impl Message {
    pub fn keys(payload: Vec<Key>) -> Self {
        Self {
            kind: MessageKind::Keys,
            payload,
        }
    }

    pub fn done() -> Self {
        Self {
            kind: MessageKind::Done,
            payload: Vec::new(),
        }
    }

    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + 8 * self.payload.len()
    }
}

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("truncated message: need {needed} bytes, have {available}")]
    TruncatedMessage { needed: usize, available: usize },
    #[error("unknown message kind {0}")]
    UnknownKind(u32),
    #[error("{0} trailing bytes after message")]
    TrailingBytes(usize),
    #[error("peer {0} closed its endpoint")]
    PeerClosed(Rank),
    #[error("{0} cannot send to itself")]
    SelfSend(Rank),
    #[error("{rank} is outside a group of size {size}")]
    InvalidRank { rank: Rank, size: usize },
    #[error("transport group needs at least one rank")]
    EmptyGroup,
    #[error("cannot bind loopback port {port}: {source}")]
    BindFailure { port: u32, source: io::Error },
    #[error("handshake from unexpected {found}, expected {expected}")]
    Handshake { expected: Rank, found: Rank },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn encode_message(msg: &Message) -> Vec<u8> {
    let mut out = Vec::with_capacity(msg.encoded_len());
    out.extend_from_slice(&(msg.kind as u32).to_le_bytes());
    out.extend_from_slice(&(msg.payload.len() as u64).to_le_bytes());
    for key in &msg.payload {
        out.extend_from_slice(&key.to_le_bytes());
    }
    out
}

pub fn decode_message(bytes: &[u8]) -> Result<Message, TransportError> {
    let (kind, count) = decode_header(bytes)?;
    let needed = payload_len(count)
        .and_then(|p| p.checked_add(HEADER_LEN))
        .ok_or(TransportError::TruncatedMessage {
            needed: usize::MAX,
            available: bytes.len(),
        })?;
    if bytes.len() < needed {
        return Err(TransportError::TruncatedMessage {
            needed,
            available: bytes.len(),
        });
    }
    if bytes.len() > needed {
        return Err(TransportError::TrailingBytes(bytes.len() - needed));
    }
    let payload = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Message { kind, payload })
}

fn decode_header(bytes: &[u8]) -> Result<(MessageKind, u64), TransportError> {
    if bytes.len() < HEADER_LEN {
        return Err(TransportError::TruncatedMessage {
            needed: HEADER_LEN,
            available: bytes.len(),
        });
    }
    let kind = u32::from_le_bytes(bytes[0..4].try_into().unwrap());
    let count = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
    Ok((MessageKind::try_from(kind)?, count))
}

fn payload_len(count: u64) -> Option<usize> {
    usize::try_from(count).ok()?.checked_mul(8)
}

/// Per-pair message counters shared by every endpoint of a group.
#[derive(Debug)]
pub struct TrafficProbe {
    size: usize,
    keys_msgs: Vec<AtomicU64>,
    done_msgs: Vec<AtomicU64>,
    keys_sent: Vec<AtomicU64>,
}

/// Frozen copy of a [`TrafficProbe`], indexed `[src * size + dst]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrafficSnapshot {
    pub size: usize,
    pub keys_msgs: Vec<u64>,
    pub done_msgs: Vec<u64>,
    pub keys_sent: Vec<u64>,
}

impl TrafficSnapshot {
    pub fn keys_messages(&self, src: usize, dst: usize) -> u64 {
        self.keys_msgs[src * self.size + dst]
    }

    pub fn done_messages(&self, src: usize, dst: usize) -> u64 {
        self.done_msgs[src * self.size + dst]
    }

    pub fn total_keys_messages(&self) -> u64 {
        self.keys_msgs.iter().sum()
    }

    /// `(src, dst, count)` for every pair that exchanged `KEYS` messages.
    pub fn keys_edges(&self) -> Vec<(usize, usize, u64)> {
        let mut edges = Vec::new();
        for src in 0..self.size {
            for dst in 0..self.size {
                let c = self.keys_messages(src, dst);
                if c > 0 {
                    edges.push((src, dst, c));
                }
            }
        }
        edges
    }
}

impl TrafficProbe {
    fn new(size: usize) -> Self {
        let zeros = || (0..size * size).map(|_| AtomicU64::new(0)).collect();
        Self {
            size,
            keys_msgs: zeros(),
            done_msgs: zeros(),
            keys_sent: zeros(),
        }
    }

    fn record(&self, src: usize, dst: usize, msg: &Message) {
        let i = src * self.size + dst;
        match msg.kind {
            MessageKind::Keys => {
                self.keys_msgs[i].fetch_add(1, Ordering::Relaxed);
                self.keys_sent[i].fetch_add(msg.payload.len() as u64, Ordering::Relaxed);
            }
            MessageKind::Done => {
                self.done_msgs[i].fetch_add(1, Ordering::Relaxed);
            }
        }
    }

    pub fn snapshot(&self) -> TrafficSnapshot {
        let load = |v: &[AtomicU64]| v.iter().map(|a| a.load(Ordering::Relaxed)).collect();
        TrafficSnapshot {
            size: self.size,
            keys_msgs: load(&self.keys_msgs),
            done_msgs: load(&self.done_msgs),
            keys_sent: load(&self.keys_sent),
        }
    }

    pub fn reset(&self) {
        for a in self
            .keys_msgs
            .iter()
            .chain(&self.done_msgs)
            .chain(&self.keys_sent)
        {
            a.store(0, Ordering::Relaxed);
        }
    }
}

enum Link {
    Local {
        tx: Vec<Option<Sender<Message>>>,
        rx: Vec<Option<Receiver<Message>>>,
    },
    Tcp {
        streams: Vec<Option<TcpStream>>,
    },
    Closed,
}

/// One rank's view of the group. Sends and receives take `&mut self`, so an
/// endpoint is driven by a single worker at a time; it can be moved between
/// threads.
pub struct Endpoint {
    rank: Rank,
    size: usize,
    link: Link,
    probe: Arc<TrafficProbe>,
}

impl fmt::Debug for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Endpoint")
            .field("rank", &self.rank)
            .field("size", &self.size)
            .finish_non_exhaustive()
    }
}

impl Endpoint {
    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check_peer(&self, peer: Rank) -> Result<(), TransportError> {
        if peer.0 >= self.size {
            return Err(TransportError::InvalidRank {
                rank: peer,
                size: self.size,
            });
        }
        if peer == self.rank {
            return Err(TransportError::SelfSend(peer));
        }
        Ok(())
    }

    pub fn send(&mut self, to: Rank, msg: Message) -> Result<(), TransportError> {
        self.check_peer(to)?;
        let closed = TransportError::PeerClosed(to);
        let (src, dst) = (self.rank.0, to.0);
        let probe = Arc::clone(&self.probe);
        match &mut self.link {
            Link::Local { tx, .. } => {
                let sender = tx[dst].as_ref().ok_or(closed)?;
                probe.record(src, dst, &msg);
                sender.send(msg).map_err(|_| TransportError::PeerClosed(to))
            }
            Link::Tcp { streams } => {
                let stream = streams[dst].as_mut().ok_or(closed)?;
                probe.record(src, dst, &msg);
                stream
                    .write_all(&encode_message(&msg))
                    .map_err(|e| peer_io_error(e, to))
            }
            Link::Closed => Err(closed),
        }
    }

    /// Blocks until the next message from `from` arrives.
    pub fn recv(&mut self, from: Rank) -> Result<Message, TransportError> {
        self.check_peer(from)?;
        let closed = TransportError::PeerClosed(from);
        match &mut self.link {
            Link::Local { rx, .. } => {
                let receiver = rx[from.0].as_ref().ok_or(closed)?;
                receiver
                    .recv()
                    .map_err(|_| TransportError::PeerClosed(from))
            }
            Link::Tcp { streams } => {
                let stream = streams[from.0].as_mut().ok_or(closed)?;
                read_frame(stream).map_err(|e| match e {
                    TransportError::Io(io) => peer_io_error(io, from),
                    other => other,
                })
            }
            Link::Closed => Err(closed),
        }
    }

    /// Shuts every channel of this endpoint. Peers blocked in `recv` on this
    /// rank observe [`TransportError::PeerClosed`].
    pub fn close(&mut self) {
        if let Link::Tcp { streams } = &self.link {
            for s in streams.iter().flatten() {
                let _ = s.shutdown(std::net::Shutdown::Both);
            }
        }
        self.link = Link::Closed;
    }
}

fn peer_io_error(e: io::Error, peer: Rank) -> TransportError {
    match e.kind() {
        io::ErrorKind::UnexpectedEof
        | io::ErrorKind::BrokenPipe
        | io::ErrorKind::ConnectionReset
        | io::ErrorKind::ConnectionAborted
        | io::ErrorKind::NotConnected => TransportError::PeerClosed(peer),
        _ => TransportError::Io(e),
    }
}

fn read_frame(stream: &mut TcpStream) -> Result<Message, TransportError> {
    let mut buf = vec![0u8; HEADER_LEN];
    stream.read_exact(&mut buf)?;
    let (_, count) = decode_header(&buf)?;
    let body = payload_len(count).ok_or(TransportError::TruncatedMessage {
        needed: usize::MAX,
        available: HEADER_LEN,
    })?;
    buf.resize(HEADER_LEN + body, 0);
    stream.read_exact(&mut buf[HEADER_LEN..])?;
    decode_message(&buf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportKind {
    Local,
    Tcp { port_base: u16 },
}

/// All endpoints of one message-passing group plus its shared traffic probe.
#[derive(Debug)]
pub struct TransportGroup {
    kind: TransportKind,
    endpoints: Vec<Endpoint>,
    probe: Arc<TrafficProbe>,
}

impl TransportGroup {
    pub fn new(kind: TransportKind, size: usize) -> Result<Self, TransportError> {
        match kind {
            TransportKind::Local => make_local_group(size),
            TransportKind::Tcp { port_base } => make_tcp_group(port_base, size),
        }
    }

    pub fn kind(&self) -> TransportKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.endpoints.len()
    }

    pub fn probe(&self) -> &TrafficProbe {
        &self.probe
    }

    pub fn endpoints_mut(&mut self) -> &mut [Endpoint] {
        &mut self.endpoints
    }

    pub fn into_endpoints(self) -> Vec<Endpoint> {
        self.endpoints
    }
}

/// In-process group: one channel per ordered rank pair.
pub fn make_local_group(size: usize) -> Result<TransportGroup, TransportError> {
    if size == 0 {
        return Err(TransportError::EmptyGroup);
    }
    let probe = Arc::new(TrafficProbe::new(size));
    let mut tx: Vec<Vec<Option<Sender<Message>>>> = (0..size)
        .map(|_| (0..size).map(|_| None).collect())
        .collect();
    let mut rx: Vec<Vec<Option<Receiver<Message>>>> = (0..size)
        .map(|_| (0..size).map(|_| None).collect())
        .collect();
    for src in 0..size {
        for dst in 0..size {
            if src != dst {
                let (s, r) = channel();
                tx[src][dst] = Some(s);
                rx[dst][src] = Some(r);
            }
        }
    }
    let endpoints = tx
        .into_iter()
        .zip(rx)
        .enumerate()
        .map(|(rank, (tx, rx))| Endpoint {
            rank: Rank(rank),
            size,
            link: Link::Local { tx, rx },
            probe: Arc::clone(&probe),
        })
        .collect();
    Ok(TransportGroup {
        kind: TransportKind::Local,
        endpoints,
        probe,
    })
}

/// Loopback TCP mesh. Rank `r` listens on `port_base + r`; each unordered
/// pair shares one duplex connection opened by the lower rank.
pub fn make_tcp_group(port_base: u16, size: usize) -> Result<TransportGroup, TransportError> {
    if size == 0 {
        return Err(TransportError::EmptyGroup);
    }
    let listeners = (0..size)
        .map(|r| {
            let port = u32::from(port_base) + r as u32;
            let bind = u16::try_from(port)
                .map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "port out of range"))
                .and_then(|p| TcpListener::bind((Ipv4Addr::LOCALHOST, p)));
            bind.map_err(|source| TransportError::BindFailure { port, source })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut streams: Vec<Vec<Option<TcpStream>>> = (0..size)
        .map(|_| (0..size).map(|_| None).collect())
        .collect();
    #[allow(clippy::needless_range_loop)]
    for low in 0..size {
        for high in low + 1..size {
            let addr: SocketAddr = listeners[high].local_addr()?;
            let mut out = TcpStream::connect(addr)?;
            out.write_all(&(low as u64).to_le_bytes())?;
            let (mut inc, _) = listeners[high].accept()?;
            let mut hello = [0u8; 8];
            inc.read_exact(&mut hello)?;
            let found = u64::from_le_bytes(hello) as usize;
            if found != low {
                return Err(TransportError::Handshake {
                    expected: Rank(low),
                    found: Rank(found),
                });
            }
            out.set_nodelay(true)?;
            inc.set_nodelay(true)?;
            streams[low][high] = Some(out);
            streams[high][low] = Some(inc);
        }
    }

    let probe = Arc::new(TrafficProbe::new(size));
    let endpoints = streams
        .into_iter()
        .enumerate()
        .map(|(rank, streams)| Endpoint {
            rank: Rank(rank),
            size,
            link: Link::Tcp { streams },
            probe: Arc::clone(&probe),
        })
        .collect();
    Ok(TransportGroup {
        kind: TransportKind::Tcp { port_base },
        endpoints,
        probe,
    })
}

/// Builds a TCP group, retrying at other base ports when a bind collides.
/// Meant for tests and tools that do not care which ports are used.
pub fn make_tcp_group_any(size: usize) -> Result<TransportGroup, TransportError> {
    let mut last = None;
    for _ in 0..32 {
        let probe = TcpListener::bind((Ipv4Addr::LOCALHOST, 0))?;
        let port = probe.local_addr()?.port();
        drop(probe);
        if u32::from(port) + size as u32 > u32::from(u16::MAX) {
            continue;
        }
        match make_tcp_group(port, size) {
            Err(e @ TransportError::BindFailure { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or(TransportError::EmptyGroup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::thread;

    #[test]
    fn encode_examples() {
        let empty = encode_message(&Message::keys(vec![]));
        assert_eq!(empty, [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);

        let one = encode_message(&Message::keys(vec![1]));
        assert_eq!(one.len(), 20);
        assert_eq!(&one[..12], &[1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&one[12..], &[1, 0, 0, 0, 0, 0, 0, 0]);

        let done = encode_message(&Message::done());
        assert_eq!(done, [2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn decode_examples() {
        let msg = Message::keys(vec![5, 6]);
        assert_eq!(decode_message(&encode_message(&msg)).unwrap(), msg);

        assert!(matches!(
            decode_message(&[0u8; 11]),
            Err(TransportError::TruncatedMessage {
                needed: 12,
                available: 11
            })
        ));

        let mut bad = encode_message(&Message::done());
        bad[0] = 99;
        assert!(matches!(
            decode_message(&bad),
            Err(TransportError::UnknownKind(99))
        ));

        let mut short = encode_message(&Message::keys(vec![1, 2, 3]));
        short.pop();
        assert!(matches!(
            decode_message(&short),
            Err(TransportError::TruncatedMessage {
                needed: 36,
                available: 35
            })
        ));

        let mut long = encode_message(&Message::keys(vec![1]));
        long.push(0);
        assert!(matches!(
            decode_message(&long),
            Err(TransportError::TrailingBytes(1))
        ));

        // A count that cannot fit in memory is reported as truncation.
        let mut huge = encode_message(&Message::keys(vec![]));
        huge[4..12].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(matches!(
            decode_message(&huge),
            Err(TransportError::TruncatedMessage { .. })
        ));
    }

    fn exercise_basic(mut group: TransportGroup) {
        let eps = group.endpoints_mut();
        let (a, rest) = eps.split_first_mut().unwrap();
        let b = &mut rest[0];

        a.send(Rank(1), Message::keys(vec![9])).unwrap();
        assert_eq!(b.recv(Rank(0)).unwrap(), Message::keys(vec![9]));

        a.send(Rank(1), Message::keys(vec![1, 2])).unwrap();
        a.send(Rank(1), Message::done()).unwrap();
        assert_eq!(b.recv(Rank(0)).unwrap(), Message::keys(vec![1, 2]));
        assert_eq!(b.recv(Rank(0)).unwrap(), Message::done());

        assert!(matches!(
            a.send(Rank(0), Message::done()),
            Err(TransportError::SelfSend(Rank(0)))
        ));
        assert!(matches!(
            a.recv(Rank(7)),
            Err(TransportError::InvalidRank { .. })
        ));

        a.close();
        assert!(matches!(
            b.recv(Rank(0)),
            Err(TransportError::PeerClosed(Rank(0)))
        ));
        assert!(matches!(
            a.send(Rank(1), Message::done()),
            Err(TransportError::PeerClosed(_))
        ));

        let traffic = group.probe().snapshot();
        assert_eq!(traffic.keys_messages(0, 1), 2);
        assert_eq!(traffic.done_messages(0, 1), 1);
        assert_eq!(traffic.keys_sent[1], 3);
    }

    #[test]
    fn local_point_to_point() {
        exercise_basic(make_local_group(2).unwrap());
    }

    #[test]
    fn tcp_point_to_point() {
        exercise_basic(make_tcp_group_any(2).unwrap());
    }

    #[test]
    fn dropped_endpoint_reads_as_closed() {
        let mut eps = make_local_group(2).unwrap().into_endpoints();
        let mut b = eps.pop().unwrap();
        drop(eps);
        assert!(matches!(
            b.recv(Rank(0)),
            Err(TransportError::PeerClosed(_))
        ));

        let mut eps = make_tcp_group_any(2).unwrap().into_endpoints();
        let mut b = eps.pop().unwrap();
        drop(eps);
        assert!(matches!(
            b.recv(Rank(0)),
            Err(TransportError::PeerClosed(_))
        ));
    }

    fn full_ping(group: TransportGroup) {
        let size = group.size();
        let probe_snapshot = {
            let mut group = group;
            thread::scope(|s| {
                for ep in group.endpoints_mut() {
                    s.spawn(move || {
                        let me = ep.rank().0;
                        for peer in (0..size).filter(|&p| p != me) {
                            ep.send(Rank(peer), Message::keys(vec![me as u64, peer as u64]))
                                .unwrap();
                        }
                        for peer in (0..size).filter(|&p| p != me) {
                            let msg = ep.recv(Rank(peer)).unwrap();
                            assert_eq!(msg.payload, vec![peer as u64, me as u64]);
                        }
                    });
                }
            });
            group.probe().snapshot()
        };
        assert_eq!(
            probe_snapshot.total_keys_messages() as usize,
            size * (size - 1)
        );
        assert_eq!(probe_snapshot.keys_edges().len(), size * (size - 1));
    }

    #[test]
    fn every_ordered_pair_delivers() {
        full_ping(make_local_group(4).unwrap());
        full_ping(make_tcp_group_any(4).unwrap());
    }

    #[test]
    fn fifo_per_pair_under_concurrent_senders() {
        for group in [make_local_group(4).unwrap(), make_tcp_group_any(4).unwrap()] {
            let mut eps = group.into_endpoints();
            let mut sink = eps.remove(0);
            thread::scope(|s| {
                for mut ep in eps {
                    s.spawn(move || {
                        let me = ep.rank().0 as u64;
                        for seq in 0..200u64 {
                            ep.send(Rank(0), Message::keys(vec![me, seq])).unwrap();
                        }
                        // Keep the endpoint alive until the sink drained it.
                        ep.recv(Rank(0)).unwrap();
                    });
                }
                for src in 1..4 {
                    for seq in 0..200u64 {
                        let msg = sink.recv(Rank(src)).unwrap();
                        assert_eq!(msg.payload, vec![src as u64, seq]);
                    }
                }
                for src in 1..4 {
                    sink.send(Rank(src), Message::done()).unwrap();
                }
            });
        }
    }

    #[test]
    fn occupied_port_is_a_bind_failure() {
        let holder = TcpListener::bind((Ipv4Addr::LOCALHOST, 0)).unwrap();
        let port = holder.local_addr().unwrap().port();
        match make_tcp_group(port, 1) {
            Err(TransportError::BindFailure { port: p, .. }) => assert_eq!(p, u32::from(port)),
            other => panic!("expected BindFailure, got {other:?}"),
        }
        assert!(matches!(
            make_tcp_group(u16::MAX, 2),
            Err(TransportError::BindFailure { .. })
        ));
    }

    #[test]
    fn empty_groups_are_rejected() {
        assert!(matches!(
            make_local_group(0),
            Err(TransportError::EmptyGroup)
        ));
        assert!(matches!(
            make_tcp_group(1, 0),
            Err(TransportError::EmptyGroup)
        ));
    }

    #[test]
    fn large_tcp_message_survives() {
        let mut eps = make_tcp_group_any(2).unwrap().into_endpoints();
        let mut b = eps.pop().unwrap();
        let mut a = eps.pop().unwrap();
        let payload: Vec<u64> = (0..500_000).map(|i| i * 31).collect();
        let expected = payload.clone();
        let sender = thread::spawn(move || a.send(Rank(1), Message::keys(payload)).unwrap());
        assert_eq!(b.recv(Rank(0)).unwrap().payload, expected);
        sender.join().unwrap();
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn round_trip(done in any::<bool>(), payload in prop::collection::vec(any::<u64>(), 0..1000)) {
            let msg = if done {
                Message { kind: MessageKind::Done, payload }
            } else {
                Message::keys(payload)
            };
            let bytes = encode_message(&msg);
            prop_assert_eq!(bytes.len(), msg.encoded_len());
            prop_assert_eq!(decode_message(&bytes).unwrap(), msg);
        }
    }
}
