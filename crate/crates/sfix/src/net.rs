//! Live streaming over TCP.
//!
//! The server encodes every frame once and hands the same framed bytes to
//! each client's bounded queue; a per-client writer thread drains the queue
//! onto the socket. A client whose queue is full is disconnected. Clients
//! are admitted only at frame boundaries: a late joiner receives Hello, a
//! RefFrame holding the current reference, then the following deltas.

use std::io::{BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{self, Receiver, SyncSender, TrySendError};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use log::{debug, info, warn};
use sfix_core::wire::{frame_message, StreamMessage};
use sfix_core::{Encoded, EncoderConfig, EncoderSession};

use crate::bench::{write_report, FrameMetrics};
use crate::codec::{delta_message, hello_for, read_message, reference_message};
use crate::error::{Error, Result};
use crate::ingest::{Fps, FrameSink, VideoSource};
use crate::session::{ClientSession, SessionEvent};

pub const DEFAULT_QUEUE_DEPTH: usize = 32;
const WRITE_TIMEOUT: Duration = Duration::from_secs(10);
const ACCEPT_POLL: Duration = Duration::from_millis(2);

type Message = Arc<Vec<u8>>;

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub config: EncoderConfig,
    pub fps_override: Option<Fps>,
    /// Per-client outbound queue length, in messages.
    pub queue_depth: usize,
    /// `(frame_no, clients)`: before frame `frame_no` is pulled from the
    /// source, block until at least `clients` clients have been admitted.
    pub holds: Vec<(u32, usize)>,
}

impl Default for ServeOptions {
    fn default() -> Self {
        Self {
            config: EncoderConfig::default(),
            fps_override: None,
            queue_depth: DEFAULT_QUEUE_DEPTH,
            holds: Vec::new(),
        }
    }
}

impl ServeOptions {
    pub fn wait_for_clients(self, clients: usize) -> Self {
        self.hold_before(0, clients)
    }

    pub fn hold_before(mut self, frame_no: u32, clients: usize) -> Self {
        self.holds.push((frame_no, clients));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ServeReport {
    pub frames_encoded: u32,
    /// Deltas framed for the wire; one per frame after the first, however
    /// many clients are connected.
    pub deltas_serialized: u32,
    /// Reference snapshots built for late joiners.
    pub snapshots_serialized: u32,
    pub clients_admitted: usize,
    pub clients_dropped: usize,
}

struct Client {
    id: usize,
    queue: SyncSender<Message>,
    socket: TcpStream,
    writer: JoinHandle<()>,
}

pub struct Server {
    listener: TcpListener,
}

impl Server {
    pub fn bind(addr: &str) -> Result<Self> {
        let listener = TcpListener::bind(addr).map_err(|source| Error::Bind {
            addr: addr.to_string(),
            source,
        })?;
        Ok(Self { listener })
    }

    pub fn local_addr(&self) -> Result<SocketAddr> {
        Ok(self.listener.local_addr()?)
    }

    /// Streams `source` to every connected client until it runs out, then
    /// sends End and closes all connections.
    pub fn run(self, source: &mut dyn VideoSource, opts: &ServeOptions) -> Result<ServeReport> {
        let stop = Arc::new(AtomicBool::new(false));
        let (accept_tx, accept_rx) = mpsc::channel();
        self.listener.set_nonblocking(true)?;
        let acceptor = {
            let stop = Arc::clone(&stop);
            let listener = self.listener;
            thread::spawn(move || accept_loop(listener, accept_tx, stop))
        };
        let result = Broadcaster::new(source, opts, accept_rx).and_then(|b| b.run());
        stop.store(true, Ordering::Relaxed);
        let _ = acceptor.join();
        result
    }
}

fn accept_loop(listener: TcpListener, tx: mpsc::Sender<TcpStream>, stop: Arc<AtomicBool>) {
    while !stop.load(Ordering::Relaxed) {
        match listener.accept() {
            Ok((stream, peer)) => {
                debug!("connection from {peer}");
                if stream.set_nonblocking(false).is_err() || tx.send(stream).is_err() {
                    return;
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => thread::sleep(ACCEPT_POLL),
            Err(e) => warn!("accept failed: {e}"),
        }
    }
}

struct Broadcaster<'a> {
    source: &'a mut dyn VideoSource,
    opts: &'a ServeOptions,
    accepted: Receiver<TcpStream>,
    session: EncoderSession,
    hello: Message,
    snapshot: Option<Message>,
    clients: Vec<Client>,
    next_id: usize,
    report: ServeReport,
    interval: Duration,
}

impl<'a> Broadcaster<'a> {
    fn new(
        source: &'a mut dyn VideoSource,
        opts: &'a ServeOptions,
        accepted: Receiver<TcpStream>,
    ) -> Result<Self> {
        let geometry = source.geometry();
        let fps = opts.fps_override.unwrap_or_else(|| source.fps());
        let hello = hello_for(geometry, fps, opts.config.mode())?;
        Ok(Self {
            source,
            opts,
            accepted,
            session: EncoderSession::new(geometry, opts.config),
            hello: Arc::new(frame_message(&StreamMessage::Hello(hello))),
            snapshot: None,
            clients: Vec::new(),
            next_id: 0,
            report: ServeReport::default(),
            interval: fps.frame_interval(),
        })
    }

    fn run(mut self) -> Result<ServeReport> {
        let mut epoch = Instant::now();
        let mut frame_no: u32 = 0;
        loop {
            if self.hold(frame_no)? {
                epoch = Instant::now()
                    .checked_sub(self.interval * frame_no)
                    .unwrap_or(epoch);
            }
            self.admit_pending();

            let due = epoch + self.interval * frame_no;
            if let Some(wait) = due.checked_duration_since(Instant::now()) {
                thread::sleep(wait);
            }
            let Some(frame) = self.source.next_frame()? else {
                break;
            };
            let bytes = match self.session.push(frame)? {
                Encoded::Reference { frame_no } => {
                    let bytes = Arc::new(frame_message(&reference_message(
                        frame_no,
                        self.session.reference().expect("just pushed"),
                    )));
                    self.snapshot = Some(Arc::clone(&bytes));
                    bytes
                }
                Encoded::Delta { frame_no, delta } => {
                    self.snapshot = None;
                    self.report.deltas_serialized += 1;
                    Arc::new(frame_message(&delta_message(frame_no, &delta)))
                }
            };
            self.report.frames_encoded += 1;
            self.broadcast(&bytes);
            frame_no += 1;
        }
        self.admit_pending();
        self.broadcast(&Arc::new(frame_message(&StreamMessage::End)));
        for client in self.clients.drain(..) {
            drop(client.queue);
            let _ = client.writer.join();
        }
        info!(
            "served {} frames to {} clients ({} dropped)",
            self.report.frames_encoded, self.report.clients_admitted, self.report.clients_dropped
        );
        Ok(self.report)
    }

    /// Blocks until the client count required before `frame_no` is met.
    /// Returns whether it had to wait.
    fn hold(&mut self, frame_no: u32) -> Result<bool> {
        let needed = self
            .opts
            .holds
            .iter()
            .filter(|(f, _)| *f == frame_no)
            .map(|(_, n)| *n)
            .max()
            .unwrap_or(0);
        let mut waited = false;
        while self.report.clients_admitted < needed {
            let stream = self
                .accepted
                .recv()
                .map_err(|_| Error::protocol("acceptor stopped"))?;
            self.admit(stream);
            waited = true;
        }
        Ok(waited)
    }

    fn admit_pending(&mut self) {
        while let Ok(stream) = self.accepted.try_recv() {
            self.admit(stream);
        }
    }

    fn admit(&mut self, socket: TcpStream) {
        let id = self.next_id;
        self.next_id += 1;
        let _ = socket.set_nodelay(true);
        let _ = socket.set_write_timeout(Some(WRITE_TIMEOUT));
        let Ok(writer_socket) = socket.try_clone() else {
            warn!("client {id}: cannot clone socket, refusing");
            return;
        };
        let (queue, rx) = mpsc::sync_channel::<Message>(self.opts.queue_depth.max(2));
        let writer = thread::spawn(move || write_loop(id, writer_socket, rx));

        let _ = queue.try_send(Arc::clone(&self.hello));
        if let Some(frame_no) = self.session.current_frame_no() {
            let snapshot = match &self.snapshot {
                Some(s) => Arc::clone(s),
                None => {
                    let reference = self.session.reference().expect("frame pushed");
                    let s = Arc::new(frame_message(&reference_message(frame_no, reference)));
                    self.report.snapshots_serialized += 1;
                    self.snapshot = Some(Arc::clone(&s));
                    s
                }
            };
            let _ = queue.try_send(snapshot);
            debug!("client {id} joins at frame {frame_no}");
        }
        self.report.clients_admitted += 1;
        self.clients.push(Client {
            id,
            queue,
            socket,
            writer,
        });
    }

    fn broadcast(&mut self, bytes: &Message) {
        let mut dropped = 0;
        self.clients
            .retain(|c| match c.queue.try_send(Arc::clone(bytes)) {
                Ok(()) => true,
                Err(TrySendError::Full(_)) => {
                    warn!("client {}: queue full, disconnecting", c.id);
                    let _ = c.socket.shutdown(std::net::Shutdown::Both);
                    dropped += 1;
                    false
                }
                Err(TrySendError::Disconnected(_)) => {
                    debug!("client {} went away", c.id);
                    dropped += 1;
                    false
                }
            });
        self.report.clients_dropped += dropped;
    }
}

fn write_loop(id: usize, mut socket: TcpStream, queue: Receiver<Message>) {
    for msg in queue {
        if let Err(e) = socket.write_all(&msg) {
            debug!("client {id}: write failed: {e}");
            return;
        }
    }
    let _ = socket.flush();
    let _ = socket.shutdown(std::net::Shutdown::Write);
}

/// Convenience wrapper: bind `listen_addr` and serve `source` with defaults.
pub fn serve(
    source: &mut dyn VideoSource,
    config: EncoderConfig,
    listen_addr: &str,
    fps_override: Option<Fps>,
) -> Result<ServeReport> {
    let opts = ServeOptions {
        config,
        fps_override,
        ..Default::default()
    };
    Server::bind(listen_addr)?.run(source, &opts)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReceiveReport {
    pub frames: u32,
    pub first_frame_no: Option<u32>,
    pub last_frame_no: Option<u32>,
    /// One row per delta frame.
    pub metrics: Vec<FrameMetrics>,
}

/// Connects to a server and feeds reconstructed frames to `sink` until End.
pub fn receive(
    connect_addr: &str,
    sink: &mut dyn FrameSink,
    metrics_path: Option<&Path>,
) -> Result<ReceiveReport> {
    let stream = TcpStream::connect(connect_addr).map_err(|source| Error::Connect {
        addr: connect_addr.to_string(),
        source,
    })?;
    let report = receive_from(BufReader::new(stream), sink)?;
    if let Some(path) = metrics_path {
        write_report(path, &report.metrics)?;
    }
    Ok(report)
}

/// The receive loop over any byte stream.
pub fn receive_from<R: std::io::Read>(
    mut input: R,
    sink: &mut dyn FrameSink,
) -> Result<ReceiveReport> {
    let mut session = ClientSession::new();
    let mut report = ReceiveReport::default();
    loop {
        let msg = read_message(&mut input)?
            .ok_or_else(|| Error::protocol("connection closed before end of stream"))?;
        match session.apply(&msg)? {
            SessionEvent::Started(h) => {
                let fps = Fps::new(h.fps_num.into(), h.fps_den.into()).expect("checked by session");
                sink.begin(h.geometry, fps)?;
            }
            SessionEvent::Frame { frame_no, frame } => {
                sink.frame(frame_no, frame)?;
                report.frames += 1;
                report.first_frame_no.get_or_insert(frame_no);
                report.last_frame_no = Some(frame_no);
                if let (Some(stats), Some(hello)) = (session.last_stats(), session.hello()) {
                    report
                        .metrics
                        .push(FrameMetrics::from_received(&stats, hello));
                }
            }
            SessionEvent::Ended => break,
        }
    }
    sink.finish()?;
    Ok(report)
}
