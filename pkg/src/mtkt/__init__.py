"""Privacy-preserving m-ticketing library and simulator.

A pairing-free set-membership zero-knowledge proof, optimized Boneh-Boyen
signature proofs, permission-token issuance, anonymous ticket validation,
threshold revocation, duplicate detection, and post-payment reporting over
a 256-bit Barreto-Naehrig bilinear group.
"""

from .group import (G1Element, G2Element, GTElement, GroupContext,
                    default_context, hash_to_scalar)
from .protocol import (MTicket, PermissionToken, PublicParameters, TicketSession,
                       UserKeys, ident_duplicate, ident_ticket, ident_user,
                       report_unused, setup, ticket_issue, ticket_precompute,
                       ticket_verify)

__all__ = [
    "G1Element", "G2Element", "GTElement", "GroupContext",
    "default_context", "hash_to_scalar",
    "MTicket", "PermissionToken", "PublicParameters", "TicketSession",
    "UserKeys", "ident_duplicate", "ident_ticket", "ident_user",
    "report_unused", "setup", "ticket_issue", "ticket_precompute",
    "ticket_verify",
]

__version__ = "0.1.0"
