"""draftdesk: instructor-in-the-loop discussion forum assistant.

Students post questions; instructors invoke a hashtag command language
(#reply, #help, #prev, #related, #anon) that triggers retrieval-
augmented draft generation. Drafts are privately reviewed, edited, and
published (optionally under a persistent anonymous alias), and all
usage and edits are measured.
"""

__version__ = "0.1.0"
