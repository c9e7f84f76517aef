"""Built-in word and phrase banks for the corpus synthesizer.

Filler and remark phrases contain no digits and none of the short tokens
that appear as leaf values (checkbox states, type names, units), so a
line made only of filler can never be mistaken for data.
"""

DOMAINS = (
    "Quality Assurance",
    "Batch Manufacturing",
    "Equipment Calibration",
    "Sterility Testing",
    "Deviation Management",
    "Cleaning Validation",
    "Supplier Qualification",
    "Stability Studies",
)

DOCUMENT_KINDS = ("Batch Record", "Inspection Report", "Review Checklist", "Audit Dossier", "Release Summary")

SECTION_TITLES = (
    "Equipment Readiness",
    "Raw Material Receipt",
    "Process Parameters",
    "In-Process Controls",
    "Environmental Monitoring",
    "Operator Training",
    "Documentation Review",
    "Packaging Operations",
    "Sampling Plan",
    "Corrective Actions",
)

SUBSECTION_TITLES = (
    "Line Clearance",
    "Filter Integrity",
    "Mixing Step",
    "Fill Weight Checks",
    "Temperature Log",
    "Label Reconciliation",
    "Bioburden Results",
    "Yield Calculation",
    "Hold Time Review",
    "Visual Inspection",
)

DETAIL_TITLES = (
    "Observation Entry",
    "Measurement Detail",
    "Reviewer Comment",
    "Instrument Reading",
    "Signature Record",
    "Exception Note",
)

VARIABLES = (
    ("Temperature (degC)", 150, 450),
    ("Pressure (kPa)", 900, 1200),
    ("Agitation (rpm)", 500, 2500),
    ("Fill Volume (mL)", 95, 105),
    ("Humidity (pct RH)", 300, 650),
    ("Hold Time (h)", 10, 480),
    ("Dissolved Oxygen (pct)", 200, 800),
    ("Batch Size (kg)", 4000, 9000),
)

TABLE_PARAMETERS = (
    "pH",
    "Conductivity",
    "Turbidity",
    "Endotoxin",
    "Viscosity",
    "Osmolality",
    "Moisture",
    "Particle Count",
)

TABLE_UNITS = ("mS/cm", "NTU", "EU/mL", "cP", "mOsm/kg", "pct w/w", "per mL", "pH units")

TABLE_VALUE_COLUMNS = ("Target", "Observed", "Lower Limit", "Upper Limit")

CHECKBOX_LABELS = (
    "Line clearance verified",
    "Gowning inspection complete",
    "Balance calibration current",
    "Cleaning log signed",
    "Deviation raised",
    "Second person verification",
    "Labels reconciled",
    "Seal integrity confirmed",
)

PARAGRAPH_SUBJECTS = ("The operator", "The reviewer", "The shift lead", "The quality officer", "The analyst")
PARAGRAPH_VERBS = ("recorded", "verified", "reviewed", "documented", "confirmed", "escalated")
PARAGRAPH_OBJECTS = (
    "the cleaning status of the vessel",
    "the seal condition before transfer",
    "the weights against the master formula",
    "the alarm history for the shift",
    "the dispensing sequence for the lot",
    "the sample chain of custody",
)

CONTENT_SENTENCES = (
    "All entries were completed contemporaneously by trained staff.",
    "Results were compared against the approved specification sheet.",
    "No unplanned events were reported during this step.",
    "Supporting printouts were attached to the master record.",
    "The step was performed under the current approved procedure.",
    "Each reading was countersigned by a second person.",
)

# Phrases introducing a data point.
LEADS = (
    "Per the record,",
    "As logged,",
    "The entry shows that",
    "It is noted that",
    "For reference,",
    "Recorded here:",
)

# Unrelated remark closing each data point.
REMARKS = (
    "the corridor clock ran slightly fast that week",
    "the cafeteria served soup for lunch",
    "someone left a coffee mug by the door",
    "the parking lot was resurfaced recently",
    "the weather stayed overcast all afternoon",
    "a delivery truck idled outside for a while",
    "the break room kettle is still broken",
    "the lobby plants were watered early",
)

FILLER = (
    "Good documentation practice asks that every record be legible, attributable and permanent.",
    "Aseptic processing depends on disciplined gowning and careful movement in clean rooms.",
    "Regulators expect firms to keep their procedures current and their staff trained.",
    "A deviation is any departure from an approved instruction or established standard.",
    "Calibration links a measuring device to a recognised reference standard.",
    "Process validation gives documented evidence that a process is reproducible.",
    "Cleaning verification helps prevent carry-over between product campaigns.",
    "Change control keeps modifications to equipment and methods under review.",
    "Risk assessment weighs the severity and likelihood of potential failures.",
    "Supplier audits help confirm that purchased materials meet expectations.",
    "Environmental monitoring tracks viable and non-viable particles over time.",
    "Stability programs study how product quality holds up during storage.",
)

CAPTION_WORDS = (("measure", "ments"), ("observ", "ations"), ("read", "ings"), ("record", "ings"))
