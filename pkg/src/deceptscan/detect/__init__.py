from .attachment import ExtensionChain, detect_attachments, extension_chain
from .content import detect_content
from .link import detect_links
from .sender import detect_sender

__all__ = [
    "ExtensionChain",
    "detect_attachments",
    "detect_content",
    "detect_links",
    "detect_sender",
    "extension_chain",
]
