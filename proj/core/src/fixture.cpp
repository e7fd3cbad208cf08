#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "synthrec/corpus.hpp"
#include "synthrec/errors.hpp"
#include "synthrec/rng.hpp"

// Deterministic gold-annotated letter corpus. Slot values are drawn from the
// lists below; the shipped PHI ruleset is written against the same lists so
// every emitted gold span is detectable (a test pins that alignment).

namespace synthrec {
namespace {

constexpr std::array kFirstNamesMale = {
    "John", "Robert", "David", "Michael", "Thomas", "Daniel", "Peter",
    "Samuel", "Walter", "Henry", "George", "Arthur"};
constexpr std::array kFirstNamesFemale = {
    "Emily", "Susan", "Margaret", "Alice", "Helen", "Laura", "Ruth",
    "Clara", "Diane", "Nora", "Grace", "Irene"};
constexpr std::array kSurnames = {
    "Walker",  "Hughes",   "Bennett",  "Caldwell", "Donovan", "Ellsworth",
    "Fairbanks", "Garrison", "Holloway", "Ingram",  "Jennings", "Kensington",
    "Lockhart", "Mercer",   "Norwood",  "Osborne",  "Prescott", "Quimby",
    "Radcliffe", "Sheffield", "Thornton", "Underwood", "Vance", "Whitfield"};
constexpr std::array kCities = {
    "Boston", "Denver", "Portland", "Austin", "Seattle", "Madison",
    "Richmond", "Savannah", "Tacoma", "Fresno", "Dayton", "Tulsa"};
constexpr std::array kHospitals = {
    "Riverside General Hospital", "Lakewood Memorial Hospital",
    "Hillcrest Community Clinic", "Fairview Regional Hospital",
    "Brookside General Hospital", "Parkview Memorial Clinic"};
constexpr std::array kStreets = {"Maple", "Oak", "Cedar", "Birch", "Elm",
                                 "Willow", "Aspen", "Juniper"};
constexpr std::array kStreetKinds = {"Street", "Avenue", "Road", "Lane"};
constexpr std::array kMonths = {"January", "February", "March",     "April",
                                "May",     "June",     "July",      "August",
                                "September", "October", "November", "December"};

constexpr std::array kProblems = {
    "hypertension",        "diabetes mellitus", "pneumonia",
    "atrial fibrillation", "congestive heart failure",
    "chronic kidney disease", "asthma",         "hyperlipidemia",
    "anemia",              "hypothyroidism",    "cellulitis",
    "gastritis",           "osteoarthritis",    "urinary tract infection",
    "migraine",            "depression"};
constexpr std::array kTests = {
    "chest x - ray",        "complete blood count", "electrocardiogram",
    "echocardiogram",       "basic metabolic panel", "urinalysis",
    "lipid panel",          "thyroid function test", "ct scan",
    "mri of the brain",     "blood culture",         "troponin level"};
constexpr std::array kTreatments = {
    "metformin",    "lisinopril",  "atorvastatin", "amoxicillin",
    "furosemide",   "warfarin",    "levothyroxine", "albuterol",
    "omeprazole",   "prednisone",  "insulin",       "amlodipine",
    "azithromycin", "gabapentin",  "sertraline",    "ibuprofen"};

constexpr std::array kFindings = {"unremarkable", "reassuring", "stable",
                                  "normal", "improved", "satisfactory"};
constexpr std::array kCourses = {
    "recovered steadily and tolerated the regimen well",
    "improved gradually over the following days",
    "responded well to the treatment",
    "remained comfortable throughout the stay",
    "showed steady clinical improvement"};
constexpr std::array kComplaints = {
    "worsening shortness of breath", "persistent chest discomfort",
    "increasing fatigue and dizziness", "a productive cough and fever",
    "intermittent abdominal pain", "swelling of the lower extremities"};

// Assembles letter text while recording gold spans at exact offsets. All
// template text is ASCII, so byte and codepoint offsets coincide.
class LetterBuilder {
 public:
  explicit LetterBuilder(std::string id) { doc_id_ = std::move(id); }

  void lit(std::string_view s) { text_.append(s); }

  void phi(std::string category, std::string subtype, std::string_view value) {
    AnnotationSpan s;
    s.ns = SpanNamespace::Phi;
    s.category = std::move(category);
    s.subtype = std::move(subtype);
    s.source = SpanSource::Gold;
    s.start = text_.size();
    text_.append(value);
    s.end = text_.size();
    phi_.push_back(std::move(s));
  }

  void med(std::string label, std::string_view value) {
    AnnotationSpan s;
    s.ns = SpanNamespace::Med;
    s.category = std::move(label);
    s.source = SpanSource::Gold;
    s.start = text_.size();
    text_.append(value);
    s.end = text_.size();
    med_.push_back(std::move(s));
  }

  AnnotatedDocument finish() {
    AnnotatedDocument ad;
    ad.doc = tokenize(text_, doc_id_);
    for (auto& s : phi_) {
      align_span_to_tokens(ad.doc, s);
      ad.gold_phi.push_back(s);
    }
    for (auto& s : med_) {
      align_span_to_tokens(ad.doc, s);
      ad.gold_med.push_back(s);
    }
    return ad;
  }

 private:
  std::string doc_id_;
  std::string text_;
  std::vector<AnnotationSpan> phi_;
  std::vector<AnnotationSpan> med_;
};

template <typename Array>
std::string_view pick(Rng& rng, const Array& arr) {
  return arr[rng.bounded(arr.size())];
}

std::string two_digits(std::uint64_t v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

struct Person {
  std::string first, last, title, pronoun_subj, pronoun_poss;
};

Person make_patient(Rng& rng) {
  Person p;
  if (rng.bounded(2) == 0) {
    p.first = pick(rng, kFirstNamesMale);
    p.title = "Mr.";
    p.pronoun_subj = "He";
    p.pronoun_poss = "His";
  } else {
    p.first = pick(rng, kFirstNamesFemale);
    p.title = "Ms.";
    p.pronoun_subj = "She";
    p.pronoun_poss = "Her";
  }
  p.last = pick(rng, kSurnames);
  return p;
}

struct Dates {
  std::string iso, numeric, monthname;
};

Dates make_dates(Rng& rng) {
  std::uint64_t year = 2060 + rng.bounded(15);
  std::uint64_t month = 1 + rng.bounded(12);
  std::uint64_t day = 1 + rng.bounded(28);
  Dates d;
  d.iso = std::to_string(year) + "-" + two_digits(month) + "-" + two_digits(day);
  d.numeric = two_digits(month) + "/" + two_digits(day) + "/" + std::to_string(year);
  d.monthname = std::string(kMonths[month - 1]) + " " + std::to_string(day) +
                ", " + std::to_string(year);
  return d;
}

std::string make_phone(Rng& rng) {
  return "555-" + std::to_string(100 + rng.bounded(900)) + "-" +
         std::to_string(1000 + rng.bounded(9000));
}

std::string make_mrn(Rng& rng) {
  return std::to_string(1000000 + rng.bounded(9000000));
}

std::string make_zip(Rng& rng) {
  return std::to_string(10000 + rng.bounded(89999));
}

std::string make_street(Rng& rng) {
  return std::to_string(1 + rng.bounded(99)) + " " +
         std::string(pick(rng, kStreets)) + " " +
         std::string(pick(rng, kStreetKinds));
}

void body_paragraph(LetterBuilder& b, Rng& rng, const Person& pat) {
  b.lit(pat.pronoun_subj);
  b.lit(" presented with ");
  b.lit(pick(rng, kComplaints));
  b.lit(". On examination the vital signs were ");
  b.lit(pick(rng, kFindings));
  b.lit(" and the lungs were clear. A ");
  b.med("TEST", pick(rng, kTests));
  b.lit(" was obtained and the result was ");
  b.lit(pick(rng, kFindings));
  b.lit(". ");
  b.lit(pat.pronoun_subj);
  b.lit(" was started on ");
  b.med("TREATMENT", pick(rng, kTreatments));
  b.lit(" and ");
  b.lit(pick(rng, kCourses));
  b.lit(". ");
  b.lit(pat.pronoun_poss);
  b.lit(" ");
  b.med("PROBLEM", pick(rng, kProblems));
  b.lit(" remained well controlled with ");
  b.med("TREATMENT", pick(rng, kTreatments));
  b.lit(".");
}

AnnotatedDocument discharge_summary(const std::string& id, Rng& rng) {
  LetterBuilder b(id);
  Person pat = make_patient(rng);
  Person doc;
  doc.first = pick(rng, kFirstNamesFemale);
  doc.last = pick(rng, kSurnames);
  Dates dates = make_dates(rng);
  std::string age = std::to_string(35 + rng.bounded(55));
  std::string city(pick(rng, kCities));

  b.lit("Record date: ");
  b.phi("DATE", "", dates.iso);
  b.lit("\n\nDISCHARGE SUMMARY\n\nPatient: ");
  b.lit(pat.title);
  b.lit(" ");
  b.phi("NAME", "PATIENT", pat.first + " " + pat.last);
  b.lit("\nMRN: ");
  b.phi("ID", "MEDICAL RECORD NUMBER", make_mrn(rng));
  b.lit("\nAdmitted: ");
  b.phi("DATE", "", dates.numeric);
  b.lit("\nDischarged: ");
  b.phi("DATE", "", dates.monthname);
  b.lit("\n\n");
  b.lit(pat.title);
  b.lit(" ");
  b.phi("NAME", "PATIENT", pat.last);
  b.lit(" is a ");
  b.phi("AGE", "", age);
  b.lit("-year-old resident of ");
  b.phi("LOCATION", "CITY", city);
  b.lit(" with a history of ");
  b.med("PROBLEM", pick(rng, kProblems));
  b.lit(". ");
  b.lit(pat.pronoun_subj);
  b.lit(" was admitted to ");
  b.phi("LOCATION", "HOSPITAL", pick(rng, kHospitals));
  b.lit(" for evaluation. ");
  body_paragraph(b, rng, pat);
  b.lit("\n\n");
  b.lit(pat.pronoun_subj);
  b.lit(" was discharged home to ");
  b.phi("LOCATION", "STREET", make_street(rng));
  b.lit(", ");
  b.phi("LOCATION", "CITY", city);
  b.lit(" ");
  b.phi("LOCATION", "ZIP", make_zip(rng));
  b.lit(". Please call ");
  b.phi("CONTACT", "PHONE", make_phone(rng));
  b.lit(" with any questions.\n\nSincerely,\nDr. ");
  b.phi("NAME", "DOCTOR", doc.first + " " + doc.last);
  b.lit("\n");
  return b.finish();
}

AnnotatedDocument admission_note(const std::string& id, Rng& rng) {
  LetterBuilder b(id);
  Person pat = make_patient(rng);
  Dates dates = make_dates(rng);
  std::string age = std::to_string(35 + rng.bounded(55));

  b.lit("ADMISSION NOTE\n\nDate of admission: ");
  b.phi("DATE", "", dates.monthname);
  b.lit("\nPatient: ");
  b.lit(pat.title);
  b.lit(" ");
  b.phi("NAME", "PATIENT", pat.first + " " + pat.last);
  b.lit("\nMRN: ");
  b.phi("ID", "MEDICAL RECORD NUMBER", make_mrn(rng));
  b.lit("\n\nThe patient is a ");
  b.phi("AGE", "", age);
  b.lit("-year-old admitted to ");
  b.phi("LOCATION", "HOSPITAL", pick(rng, kHospitals));
  b.lit(" on ");
  b.phi("DATE", "", dates.numeric);
  b.lit(" with ");
  b.med("PROBLEM", pick(rng, kProblems));
  b.lit(". ");
  body_paragraph(b, rng, pat);
  b.lit("\n\nThe plan is to continue ");
  b.med("TREATMENT", pick(rng, kTreatments));
  b.lit(" and repeat the ");
  b.med("TEST", pick(rng, kTests));
  b.lit(" in the morning. The family can be reached at ");
  b.phi("CONTACT", "PHONE", make_phone(rng));
  b.lit(".\n");
  return b.finish();
}

AnnotatedDocument correspondence(const std::string& id, Rng& rng) {
  LetterBuilder b(id);
  Person pat = make_patient(rng);
  Person ref;
  ref.first = pick(rng, kFirstNamesMale);
  ref.last = pick(rng, kSurnames);
  Dates dates = make_dates(rng);
  std::string age = std::to_string(35 + rng.bounded(55));
  std::string city(pick(rng, kCities));

  b.phi("DATE", "", dates.monthname);
  b.lit("\n\nDear Dr. ");
  b.phi("NAME", "DOCTOR", ref.last);
  b.lit(",\n\nThank you for referring ");
  b.lit(pat.title);
  b.lit(" ");
  b.phi("NAME", "PATIENT", pat.first + " " + pat.last);
  b.lit(", a ");
  b.phi("AGE", "", age);
  b.lit("-year-old patient from ");
  b.phi("LOCATION", "CITY", city);
  b.lit(", whom I reviewed in clinic on ");
  b.phi("DATE", "", dates.numeric);
  b.lit(" for ");
  b.med("PROBLEM", pick(rng, kProblems));
  b.lit(". ");
  body_paragraph(b, rng, pat);
  b.lit("\n\nI will see ");
  b.lit(pat.title);
  b.lit(" ");
  b.phi("NAME", "PATIENT", pat.last);
  b.lit(" again in six weeks. My office number is ");
  b.phi("CONTACT", "PHONE", make_phone(rng));
  b.lit(" should you wish to discuss the case.\n\nKind regards,\nDr. ");
  b.phi("NAME", "DOCTOR",
        std::string(pick(rng, kFirstNamesFemale)) + " " +
            std::string(pick(rng, kSurnames)));
  b.lit("\n");
  return b.finish();
}

}  // namespace

Corpus generate_fixture_corpus(std::uint64_t seed, std::size_t n_docs) {
  if (n_docs < 1) throw DataError("generate_fixture_corpus: n_docs must be >= 1");
  Corpus corpus;
  corpus.name = "fixture-" + std::to_string(seed) + "-" + std::to_string(n_docs);
  for (std::size_t i = 0; i < n_docs; ++i) {
    std::string id = "fx-" + std::to_string(seed) + "-" + std::to_string(i);
    StreamKey key;
    key.mix("fixture").mix(seed).mix(static_cast<std::uint64_t>(i));
    Rng rng = key.rng();
    switch (i % 3) {
      case 0:
        corpus.docs.push_back(discharge_summary(id, rng));
        break;
      case 1:
        corpus.docs.push_back(admission_note(id, rng));
        break;
      default:
        corpus.docs.push_back(correspondence(id, rng));
        break;
    }
  }
  return corpus;
}

}  // namespace synthrec
