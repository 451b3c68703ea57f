"""One-pass, sublinear-space verifiers for data-structure operation
transcripts: priority queues, stacks, queues, deques, two-bracket Dyck
strings, and their timestamped variants."""

from .blocks import BlockScanner, BlockViolation, CanonicalBlock, scan_block
from .checkers import deque_check, dyck_check, queue_check, stack_check, ts_check
from .errors import (
    CapacityError,
    FormatError,
    IndexBoundError,
    KindError,
    ParamError,
    TranscheckError,
)
from .fingerprint import (
    ExactCells,
    Fingerprint,
    FingerprintParams,
    MERSENNE_61,
    fp_add,
    fp_equal,
)
from .genmut import MutationKind, gen_valid, mutate
from .oracle import LANGUAGES, canonical_block_by_rewriting, oracle_check
from .pqcheck import PqChecker, check_pq_epochs, pq_finalize, pq_pipeline, pq_step
from .reduction import HeightTracker, dyck_to_pq, dyck_to_pq_stream, height
from .transcript import (
    Header,
    Kind,
    Operation,
    TranscriptStream,
    balance,
    ext,
    ext_head,
    ext_tail,
    ext_ts,
    ext_ts_head,
    ext_ts_tail,
    infer_universe,
    ins,
    ins_head,
    ins_tail,
    paren,
    parse_line,
    parse_transcript_text,
    render_transcript,
    serialize,
    stream_of,
)
from .verdict import ACCEPT, CheckResult, Verdict, reject

__version__ = "0.1.0"
