#!/usr/bin/env python3
"""Writes the golden fixture corpus next to this script.

Each post lists its raw text and a hand-authored dependency parse, one token
per line: `surface lemma UPOS head deprel [kind] [ENT=TYPE] [DROP]`.
`kind` is one of - h m u e r (plain, hashtag, mention, url, emoticon, reserved).
DROP marks tokens the preprocessing rules are expected to remove; the second
pass then reuses the first-pass tree without them unless `norm_sents` gives a
re-parse. Offsets are UTF-8 byte offsets.

Expected triples are written by hand as (subject, verb, object, pattern[, flags]).
"""

import json
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent
KINDS = {"-": "plain", "h": "hashtag", "m": "mention", "u": "url", "e": "emoticon", "r": "reserved"}

POSTS = []


def post(pid, text, sents, norm=None, norm_sents=None, triples=(), coref=(), duplicate=False):
    POSTS.append(dict(id=pid, text=text, sents=sents, norm=norm, norm_sents=norm_sents,
                      triples=list(triples), coref=list(coref), duplicate=duplicate))


# -- preprocessing rule cases ----------------------------------------------

post("g01", "@bansijpatel @RTatsat @kiranpatel1977 Thanks for updating the information with us.", ["""
@bansijpatel @bansijpatel PROPN 4 npadvmod m DROP
@RTatsat @RTatsat PROPN 4 npadvmod m DROP
@kiranpatel1977 @kiranpatel1977 PROPN 4 npadvmod m DROP
Thanks thanks NOUN 0 ROOT
for for ADP 4 prep
updating update VERB 5 pcomp
the the DET 8 det
information information NOUN 6 dobj
with with ADP 6 prep
us we PRON 9 pobj
. . PUNCT 4 punct
"""], norm="Thanks for updating the information with us.")

post("g02", "@AMDRyzen enabling #DataAnalytics in healthcare with faster processors.", ["""
@AMDRyzen @AMDRyzen PROPN 2 nsubj m
enabling enable VERB 0 ROOT
#DataAnalytics #DataAnalytics PROPN 2 dobj h
in in ADP 3 prep
healthcare healthcare NOUN 4 pobj
with with ADP 2 prep
faster fast ADJ 8 amod
processors processor NOUN 6 pobj
. . PUNCT 2 punct
"""], triples=[("@AMDRyzen", "enabling", "#DataAnalytics in healthcare", "nsubj,dobj")])

post("g03", "Mr. Lewis gives the reader a quixotic guided tour through Silicon Valley while showing how its "
     "success stories revolutionized American business.", ["""
Mr. Mr. PROPN 2 compound
Lewis Lewis PROPN 3 nsubj
gives give VERB 0 ROOT
the the DET 5 det
reader reader NOUN 3 dative
a a DET 9 det
quixotic quixotic ADJ 9 amod
guided guide VERB 9 amod
tour tour NOUN 3 dobj
through through ADP 3 prep
Silicon Silicon PROPN 12 compound
Valley Valley PROPN 10 pobj
while while SCONJ 14 mark
showing show VERB 3 advcl
how how SCONJ 19 advmod
its its PRON 18 poss
success success NOUN 18 compound
stories story NOUN 19 nsubj
revolutionized revolutionize VERB 14 ccomp
American American ADJ 21 amod
business business NOUN 19 dobj
. . PUNCT 3 punct
"""], triples=[("Mr. Lewis", "gives", "quixotic guided tour", "nsubj,dobj"),
               ("success stories", "revolutionized", "American business", "nsubj,dobj")])

post("g04", "Howe says it was discovered by cows drawn to cool air rising from the mouth of the cave on a hot day .", ["""
Howe Howe PROPN 2 nsubj
says say VERB 0 ROOT
it it PRON 5 nsubjpass
was be AUX 5 auxpass
discovered discover VERB 2 ccomp
by by ADP 5 agent
cows cow NOUN 6 pobj
drawn draw VERB 7 acl
to to ADP 8 prep
cool cool ADJ 11 amod
air air NOUN 9 pobj
rising rise VERB 11 acl
from from ADP 12 prep
the the DET 15 det
mouth mouth NOUN 13 pobj
of of ADP 15 prep
the the DET 18 det
cave cave NOUN 16 pobj
on on ADP 12 prep
a a DET 22 det
hot hot ADJ 22 amod
day day NOUN 19 pobj
. . PUNCT 2 punct
"""])

post("g05", "Salesforce really has the power to transform your business.", ["""
Salesforce Salesforce PROPN 3 nsubj
really really ADV 3 advmod
has have VERB 0 ROOT
the the DET 5 det
power power NOUN 3 dobj
to to PART 7 aux
transform transform VERB 5 acl
your your PRON 9 poss
business business NOUN 7 dobj
. . PUNCT 3 punct
"""], triples=[("Salesforce", "has", "power", "nsubj,dobj")])

# -- one event, three surface relations -------------------------------------

post("g06", "BLEND360 acquires Engagement Factory to expand its marketing analytics practice.", ["""
BLEND360 BLEND360 PROPN 2 nsubj
acquires acquire VERB 0 ROOT
Engagement Engagement PROPN 4 compound
Factory Factory PROPN 2 dobj
to to PART 6 aux
expand expand VERB 2 advcl
its its PRON 10 poss
marketing marketing NOUN 10 compound
analytics analytic NOUN 10 compound
practice practice NOUN 6 dobj
. . PUNCT 2 punct
"""], triples=[("BLEND360", "acquires", "Engagement Factory", "nsubj,dobj")])

post("g07", "Yesterday BLEND360 acquired Engagement Factory, a customer engagement agency based in Chicago.", ["""
Yesterday yesterday NOUN 3 npadvmod
BLEND360 BLEND360 PROPN 3 nsubj
acquired acquire VERB 0 ROOT
Engagement Engagement PROPN 5 compound
Factory Factory PROPN 3 dobj
, , PUNCT 5 punct
a a DET 10 det
customer customer NOUN 10 compound
engagement engagement NOUN 10 compound
agency agency NOUN 5 appos
based base VERB 10 acl
in in ADP 11 prep
Chicago Chicago PROPN 12 pobj
. . PUNCT 3 punct
"""], triples=[("BLEND360", "acquired", "Engagement Factory", "nsubj,dobj")])

post("g08", "Marketing news: BLEND360 bought Engagement Factory for an undisclosed sum #MarTech #data", ["""
Marketing marketing NOUN 2 compound DROP
news news NOUN 5 dep DROP
: : PUNCT 5 punct DROP
BLEND360 BLEND360 PROPN 5 nsubj
bought buy VERB 0 ROOT
Engagement Engagement PROPN 7 compound
Factory Factory PROPN 5 dobj
for for ADP 5 prep
an an DET 11 det
undisclosed undisclosed ADJ 11 amod
sum sum NOUN 8 pobj
#MarTech #MarTech PROPN 5 npadvmod h
#data #data NOUN 12 appos h DROP
"""], norm="BLEND360 bought Engagement Factory for an undisclosed sum #MarTech",
     triples=[("BLEND360", "bought", "Engagement Factory", "nsubj,dobj")])

post("g09", "Microsoft bought RiskIQ to strengthen its cloud security portfolio.", ["""
Microsoft Microsoft PROPN 2 nsubj
bought buy VERB 0 ROOT
RiskIQ RiskIQ PROPN 2 dobj
to to PART 5 aux
strengthen strengthen VERB 2 advcl
its its PRON 9 poss
cloud cloud NOUN 8 compound
security security NOUN 9 compound
portfolio portfolio NOUN 5 dobj
. . PUNCT 2 punct
"""], triples=[("Microsoft", "bought", "RiskIQ", "nsubj,dobj")])

post("g10", "Hootsuite bought an AI chatbot firm called Heyday.", ["""
Hootsuite Hootsuite PROPN 2 nsubj
bought buy VERB 0 ROOT
an an DET 6 det
AI AI PROPN 5 compound
chatbot chatbot NOUN 6 compound
firm firm NOUN 2 dobj
called call VERB 6 acl
Heyday Heyday PROPN 7 oprd
. . PUNCT 2 punct
"""], triples=[("Hootsuite", "bought", "AI chatbot firm", "nsubj,dobj")])

post("g11", "Walmart buys a retail robotics startup.", ["""
Walmart Walmart PROPN 2 nsubj
buys buy VERB 0 ROOT
a a DET 6 det
retail retail NOUN 6 compound
robotics robotic NOUN 6 compound
startup startup NOUN 2 dobj
. . PUNCT 2 punct
"""], triples=[("Walmart", "buys", "retail robotics startup", "nsubj,dobj")])

# -- relation families ---------------------------------------------------------

post("g12", "How the UR+ Ecosystem is Fueling Cobot Market Growth", ["""
How how SCONJ 6 advmod
the the DET 4 det
UR+ UR+ PROPN 4 compound
Ecosystem Ecosystem PROPN 6 nsubj
is be AUX 6 aux
Fueling fuel VERB 0 ROOT
Cobot Cobot PROPN 8 compound
Market Market PROPN 9 compound
Growth Growth PROPN 6 dobj
"""], triples=[("UR+ Ecosystem", "Fueling", "Cobot Market Growth", "nsubj,dobj")])

post("g13", "Cloud computing is fueling the growth of #fintech startups in Asia.", ["""
Cloud cloud NOUN 2 compound
computing computing NOUN 4 nsubj
is be AUX 4 aux
fueling fuel VERB 0 ROOT
the the DET 6 det
growth growth NOUN 4 dobj
of of ADP 6 prep
#fintech #fintech NOUN 9 compound h
startups startup NOUN 7 pobj
in in ADP 9 prep
Asia Asia PROPN 10 pobj
. . PUNCT 4 punct
"""], triples=[("Cloud computing", "fueling", "growth of #fintech startups", "nsubj,dobj")])

post("g14", "Digital transformation in Ho Chi Minh is being driven by remote working", ["""
Digital digital ADJ 2 amod
transformation transformation NOUN 9 nsubjpass
in in ADP 2 prep
Ho Ho PROPN 6 compound
Chi Chi PROPN 6 compound
Minh Minh PROPN 3 pobj
is be AUX 9 aux
being be AUX 9 auxpass
driven drive VERB 0 ROOT
by by ADP 9 agent
remote remote ADJ 12 amod
working working NOUN 10 pobj
"""], triples=[("remote working", "driven by", "Digital transformation in Ho Chi Minh", "nsubjpass,agent,pobj")])

post("g15", "Huge social trends are being accelerated by the pandemic.", ["""
Huge huge ADJ 3 amod
social social ADJ 3 amod
trends trend NOUN 6 nsubjpass
are be AUX 6 aux
being be AUX 6 auxpass
accelerated accelerate VERB 0 ROOT
by by ADP 6 agent
the the DET 9 det
pandemic pandemic NOUN 7 pobj
. . PUNCT 6 punct
"""], triples=[("pandemic", "accelerated by", "Huge social trends", "nsubjpass,agent,pobj")])

post("g16", "#Automation fuels innovation across the #manufacturing sector.", ["""
#Automation #Automation PROPN 2 nsubj h
fuels fuel VERB 0 ROOT
innovation innovation NOUN 2 dobj
across across ADP 3 prep
the the DET 7 det
#manufacturing #manufacturing NOUN 7 compound h
sector sector NOUN 4 pobj
. . PUNCT 2 punct
"""], triples=[("#Automation", "fuels", "innovation across the #manufacturing sector", "nsubj,dobj")])

post("g17", "Machine learning can identify signs of Alzheimers in patients", ["""
Machine machine NOUN 2 compound
learning learning NOUN 4 nsubj
can can AUX 4 aux
identify identify VERB 0 ROOT
signs sign NOUN 4 dobj
of of ADP 5 prep
Alzheimers Alzheimers PROPN 6 pobj
in in ADP 4 prep
patients patient NOUN 8 pobj
"""], triples=[("Machine learning", "identify", "signs of Alzheimers", "nsubj,dobj")])

post("g18", "Research quantifies the potential of 5G in manufacturing.", ["""
Research research NOUN 2 nsubj
quantifies quantify VERB 0 ROOT
the the DET 4 det
potential potential NOUN 2 dobj
of of ADP 4 prep
5G 5G PROPN 5 pobj
in in ADP 2 prep
manufacturing manufacturing NOUN 7 pobj
. . PUNCT 2 punct
"""], triples=[("Research", "quantifies", "potential of 5G", "nsubj,dobj")])

post("g19", "AI-supported test can predict eye disease that leads to blindness", ["""
AI-supported AI-supported ADJ 2 amod
test test NOUN 4 nsubj
can can AUX 4 aux
predict predict VERB 0 ROOT
eye eye NOUN 6 compound
disease disease NOUN 4 dobj
that that PRON 8 nsubj
leads lead VERB 6 relcl
to to ADP 8 prep
blindness blindness NOUN 9 pobj
"""], triples=[("AI-supported test", "predict", "eye disease", "nsubj,dobj")])

post("g20", "Sensors identify early faults in wind turbines.", ["""
Sensors sensor NOUN 2 nsubj
identify identify VERB 0 ROOT
early early ADJ 4 amod
faults fault NOUN 2 dobj
in in ADP 4 prep
wind wind NOUN 7 compound
turbines turbine NOUN 5 pobj
. . PUNCT 2 punct
"""], triples=[("Sensors", "identify", "early faults in wind turbines", "nsubj,dobj")])

post("g21", "The pandemic accelerated #DigitalTransformation in every industry.", ["""
The the DET 2 det
pandemic pandemic NOUN 3 nsubj
accelerated accelerate VERB 0 ROOT
#DigitalTransformation #DigitalTransformation PROPN 3 dobj h
in in ADP 3 prep
every every DET 7 det
industry industry NOUN 5 pobj
. . PUNCT 3 punct
"""], triples=[("pandemic", "accelerated", "#DigitalTransformation", "nsubj,dobj")])

post("g22", "Artificial intelligence will impact the insurance sector.", ["""
Artificial artificial ADJ 2 amod
intelligence intelligence NOUN 4 nsubj
will will AUX 4 aux
impact impact VERB 0 ROOT
the the DET 7 det
insurance insurance NOUN 7 compound
sector sector NOUN 4 dobj
. . PUNCT 4 punct
"""], triples=[("Artificial intelligence", "impact", "insurance sector", "nsubj,dobj")])

post("g23", "Data-driven insights drive decision-making.", ["""
Data-driven data-driven ADJ 2 amod
insights insight NOUN 3 nsubj
drive drive VERB 0 ROOT
decision-making decision-making NOUN 3 dobj
. . PUNCT 3 punct
"""], triples=[("Data-driven insights", "drive", "decision-making", "nsubj,dobj")])

post("g24", "AutoML generates data-driven insights for small teams.", ["""
AutoML AutoML PROPN 2 nsubj
generates generate VERB 0 ROOT
data-driven data-driven ADJ 4 amod
insights insight NOUN 2 dobj
for for ADP 2 prep
small small ADJ 7 amod
teams team NOUN 5 pobj
. . PUNCT 2 punct
"""], triples=[("AutoML", "generates", "data-driven insights", "nsubj,dobj")])

post("g25", "Image classification uses transfer learning to cut training costs.", ["""
Image image NOUN 2 compound
classification classification NOUN 3 nsubj
uses use VERB 0 ROOT
transfer transfer NOUN 5 compound
learning learning NOUN 3 dobj
to to PART 7 aux
cut cut VERB 3 advcl
training training NOUN 9 compound
costs cost NOUN 7 dobj
. . PUNCT 3 punct
"""], triples=[("Image classification", "uses", "transfer learning", "nsubj,dobj")])

post("g26", "82% of CIOs implement new technology faster than last year.", ["""
82 82 NUM 2 nummod - ENT=PERCENT
% % NOUN 5 nsubj - ENT=PERCENT
of of ADP 2 prep
CIOs cio NOUN 3 pobj
implement implement VERB 0 ROOT
new new ADJ 7 amod
technology technology NOUN 5 dobj
faster fast ADV 5 advmod
than than ADP 8 prep
last last ADJ 11 amod
year year NOUN 9 pobj
. . PUNCT 5 punct
"""], triples=[("82% of CIOs", "implement", "new technology", "nsubj,dobj")])

post("g27", "Microinsurance could close the Africa insurance gap.", ["""
Microinsurance microinsurance NOUN 3 nsubj
could could AUX 3 aux
close close VERB 0 ROOT
the the DET 7 det
Africa Africa PROPN 7 compound
insurance insurance NOUN 7 compound
gap gap NOUN 3 dobj
. . PUNCT 3 punct
"""], triples=[("Microinsurance", "close", "Africa insurance gap", "nsubj,dobj")])

post("g28", "HSBC Qatar introduces mobile payments for business clients :)", ["""
HSBC HSBC PROPN 2 compound
Qatar Qatar PROPN 3 nsubj
introduces introduce VERB 0 ROOT
mobile mobile ADJ 5 amod
payments payment NOUN 3 dobj
for for ADP 5 prep
business business NOUN 8 compound
clients client NOUN 6 pobj
:) :) PUNCT 3 punct e DROP
"""], norm="HSBC Qatar introduces mobile payments for business clients",
     triples=[("HSBC Qatar", "introduces", "mobile payments for business clients", "nsubj,dobj")])

post("g29", "Ford Motor Company explores blockchain technology https://t.co/x7Qa9", ["""
Ford Ford PROPN 3 compound
Motor Motor PROPN 3 compound
Company Company PROPN 4 nsubj
explores explore VERB 0 ROOT
blockchain blockchain NOUN 6 compound
technology technology NOUN 4 dobj
https://t.co/x7Qa9 https://t.co/x7Qa9 X 4 dep u DROP
"""], norm="Ford Motor Company explores blockchain technology",
     triples=[("Ford Motor Company", "explores", "blockchain technology", "nsubj,dobj")])

post("g30", "New Belgium Brewing implemented a digital workplace solution.", ["""
New New PROPN 3 compound
Belgium Belgium PROPN 3 compound
Brewing Brewing PROPN 4 nsubj
implemented implement VERB 0 ROOT
a a DET 8 det
digital digital ADJ 8 amod
workplace workplace NOUN 8 compound
solution solution NOUN 4 dobj
. . PUNCT 4 punct
"""], triples=[("New Belgium Brewing", "implemented", "digital workplace solution", "nsubj,dobj")])

# The trailing tag run draws a spurious dobj in the raw parse.
post("g31", "@mymdec launches new support program for #SME #digitaltransformation", ["""
@mymdec @mymdec PROPN 2 nsubj m
launches launch VERB 0 ROOT
new new ADJ 5 amod
support support NOUN 5 compound
program program NOUN 2 dobj
for for ADP 5 prep
#SME #SME PROPN 6 pobj h
#digitaltransformation #digitaltransformation PROPN 2 dobj h DROP
"""], norm="@mymdec launches new support program for #SME",
     triples=[("@mymdec", "launches", "new support program for #SME", "nsubj,dobj")])

# -- coordination, composite labels, participial modifiers -------------------

post("g32", "#testautomation and #datamanagement can accelerate your #digitaltransformation", ["""
#testautomation #testautomation NOUN 5 nsubj h
and and CCONJ 1 cc
#datamanagement #datamanagement NOUN 1 conj h
can can AUX 5 aux
accelerate accelerate VERB 0 ROOT
your your PRON 7 poss
#digitaltransformation #digitaltransformation NOUN 5 dobj h
"""], triples=[("#testautomation", "accelerate", "#digitaltransformation", "nsubj,dobj"),
               ("#datamanagement", "accelerate", "#digitaltransformation", "nsubj,dobj")])

post("g33", "Retailers adopt cloud platforms and mobile apps.", ["""
Retailers retailer NOUN 2 nsubj
adopt adopt VERB 0 ROOT
cloud cloud NOUN 4 compound
platforms platform NOUN 2 dobj
and and CCONJ 4 cc
mobile mobile ADJ 7 amod
apps app NOUN 4 conj
. . PUNCT 2 punct
"""], triples=[("Retailers", "adopt", "cloud platforms", "nsubj,dobj"),
               ("Retailers", "adopt", "mobile apps", "nsubj,dobj,conj")])

post("g34", "Nvidia unveils Omniverse Cloud and new AI chips", ["""
Nvidia Nvidia PROPN 2 nsubj
unveils unveil VERB 0 ROOT
Omniverse Omniverse PROPN 4 compound
Cloud Cloud PROPN 2 dobj
and and CCONJ 2 cc
new new ADJ 8 amod
AI AI PROPN 8 compound
chips chip NOUN 2 conj
"""], triples=[("Nvidia", "unveils", "Omniverse Cloud", "nsubj,dobj"),
               ("Nvidia", "unveils", "new AI chips", "nsubj,conj")])

post("g35", "Banks that adopt open APIs grow faster.", ["""
Banks bank NOUN 6 nsubj
that that PRON 3 nsubj
adopt adopt VERB 1 acl:relcl
open open ADJ 5 amod
APIs API PROPN 3 dobj
grow grow VERB 0 ROOT
faster fast ADV 6 advmod
. . PUNCT 6 punct
"""], triples=[("Banks", "adopt", "open APIs", "acl,relcl,dobj")])

post("g36", "Teams using low-code platforms ship apps faster.", ["""
Teams team NOUN 5 nsubj
using use VERB 1 acl
low-code low-code ADJ 4 amod
platforms platform NOUN 2 dobj
ship ship VERB 0 ROOT
apps app NOUN 5 dobj
faster fast ADV 5 advmod
. . PUNCT 5 punct
"""], triples=[("Teams", "using", "low-code platforms", "acl,dobj"),
               ("Teams", "ship", "apps", "nsubj,dobj")])

# -- anaphora ----------------------------------------------------------------------

post("g37", "Siemens opened a new factory in Texas. It produces smart sensors for electric vehicles.", ["""
Siemens Siemens PROPN 2 nsubj
opened open VERB 0 ROOT
a a DET 5 det
new new ADJ 5 amod
factory factory NOUN 2 dobj
in in ADP 5 prep
Texas Texas PROPN 6 pobj
. . PUNCT 2 punct
""", """
It it PRON 2 nsubj
produces produce VERB 0 ROOT
smart smart ADJ 4 amod
sensors sensor NOUN 2 dobj
for for ADP 4 prep
electric electric ADJ 7 amod
vehicles vehicle NOUN 5 pobj
. . PUNCT 2 punct
"""], coref=[[[0, 5], [1, 1]]],
     triples=[("Siemens", "opened", "new factory in Texas", "nsubj,dobj"),
              ("new factory in Texas", "produces", "smart sensors for electric vehicles", "nsubj,dobj")])

post("g38", "@Gartner_inc released a new report. They predict strong growth in cloud spending.", ["""
@Gartner_inc @Gartner_inc PROPN 2 nsubj m
released release VERB 0 ROOT
a a DET 5 det
new new ADJ 5 amod
report report NOUN 2 dobj
. . PUNCT 2 punct
""", """
They they PRON 2 nsubj
predict predict VERB 0 ROOT
strong strong ADJ 4 amod
growth growth NOUN 2 dobj
in in ADP 4 prep
cloud cloud NOUN 7 compound
spending spending NOUN 5 pobj
. . PUNCT 2 punct
"""], coref=[[[0, 1], [1, 1]]],
     triples=[("@Gartner_inc", "released", "new report", "nsubj,dobj"),
              ("@Gartner_inc", "predict", "strong growth in cloud spending", "nsubj,dobj")])

# -- negation, questions, quantities ------------------------------------------------

post("g39", "Many SMEs do not trust public cloud providers.", ["""
Many many ADJ 2 amod
SMEs SME NOUN 5 nsubj
do do AUX 5 aux
not not PART 5 neg
trust trust VERB 0 ROOT
public public ADJ 8 amod
cloud cloud NOUN 8 compound
providers provider NOUN 5 dobj
. . PUNCT 5 punct
"""], triples=[("Many SMEs", "trust", "public cloud providers", "nsubj,dobj", "neg")])

post("g40", "Does #blockchain improve supply chain transparency?", ["""
Does do AUX 3 aux
#blockchain #blockchain NOUN 3 nsubj h
improve improve VERB 0 ROOT
supply supply NOUN 5 compound
chain chain NOUN 6 compound
transparency transparency NOUN 3 dobj
? ? PUNCT 3 punct
"""], triples=[("#blockchain", "improve", "supply chain transparency", "nsubj,dobj", "question")])

post("g41", "Less than 15% of the #banks use #AI in lending decisions.", ["""
Less less ADJ 3 advmod - ENT=PERCENT
than than ADP 3 quantmod - ENT=PERCENT
15 15 NUM 4 nummod - ENT=PERCENT
% % NOUN 8 nsubj - ENT=PERCENT
of of ADP 4 prep
the the DET 7 det
#banks #bank NOUN 5 pobj h
use use VERB 0 ROOT
#AI #AI PROPN 8 dobj h
in in ADP 8 prep
lending lending NOUN 12 compound
decisions decision NOUN 10 pobj
. . PUNCT 8 punct
"""], triples=[("Less than 15% of the #banks", "use", "#AI", "nsubj,dobj")])

post("g42", "Three fintech startups raised new funding rounds.", ["""
Three three NUM 3 nummod - ENT=CARDINAL
fintech fintech NOUN 3 compound
startups startup NOUN 4 nsubj
raised raise VERB 0 ROOT
new new ADJ 7 amod
funding funding NOUN 7 compound
rounds round NOUN 4 dobj
. . PUNCT 4 punct
"""], triples=[("Three fintech startups", "raised", "new funding rounds", "nsubj,dobj")])

# -- near duplicates -----------------------------------------------------------------

CLOUD_ADOPTION = """
Cloud cloud NOUN 2 compound
adoption adoption NOUN 4 nsubj
is be AUX 4 aux
transforming transform VERB 0 ROOT
the the DET 7 det
{0} {0} NOUN 7 compound
sector sector NOUN 4 dobj
in in ADP 7 prep
{1} {1} PROPN 8 pobj
{2} {2} PUNCT 4 punct
"""

post("g43", "Cloud adoption is transforming the retail sector in Europe.",
     [CLOUD_ADOPTION.format("retail", "Europe", ".")],
     triples=[("Cloud adoption", "transforming", "retail sector in Europe", "nsubj,dobj")])
post("g44", "Cloud adoption is transforming the retail sector in Europe!!",
     [CLOUD_ADOPTION.format("retail", "Europe", "!!")], duplicate=True)
post("g45", "Cloud adoption is transforming the banking sector in Asia.",
     [CLOUD_ADOPTION.format("banking", "Asia", ".")],
     triples=[("Cloud adoption", "transforming", "banking sector in Asia", "nsubj,dobj")])

# -- remaining rule and normalization cases ----------------------------------------

post("g46", "BREAKING: Digital transformation reshapes the energy sector", ["""
BREAKING breaking NOUN 4 dep DROP
: : PUNCT 4 punct DROP
Digital digital ADJ 4 amod
transformation transformation NOUN 5 nsubj
reshapes reshape VERB 0 ROOT
the the DET 8 det
energy energy NOUN 8 compound
sector sector NOUN 5 dobj
"""], norm="Digital transformation reshapes the energy sector", norm_sents=["""
Digital digital ADJ 2 amod
transformation transformation NOUN 3 nsubj
reshapes reshape VERB 0 ROOT
the the DET 6 det
energy energy NOUN 6 compound
sector sector NOUN 3 dobj
"""], triples=[("Digital transformation", "reshapes", "energy sector", "nsubj,dobj")])

post("g47", "Many organizations digitize their customer service.", ["""
Many many ADJ 2 amod
organizations organization NOUN 3 nsubj
digitize digitize VERB 0 ROOT
their their PRON 6 poss
customer customer NOUN 6 compound
service service NOUN 3 dobj
. . PUNCT 3 punct
"""], triples=[("Many organizations", "digitize", "customer service", "nsubj,dobj")])

post("g48", "Every organisation needs a clear #DigitalTransformation strategy.", ["""
Every every DET 2 det
organisation organisation NOUN 3 nsubj
needs need VERB 0 ROOT
a a DET 7 det
clear clear ADJ 7 amod
#DigitalTransformation #DigitalTransformation PROPN 7 compound h
strategy strategy NOUN 3 dobj
. . PUNCT 3 punct
"""], triples=[("organisation", "needs", "clear #DigitalTransformation strategy", "nsubj,dobj")])

post("g49", "RT @IBM: Hybrid cloud drives faster innovation", ["""
RT RT X 2 dep r DROP
@IBM @IBM PROPN 6 npadvmod m DROP
: : PUNCT 6 punct DROP
Hybrid hybrid ADJ 5 amod
cloud cloud NOUN 6 nsubj
drives drive VERB 0 ROOT
faster fast ADJ 8 amod
innovation innovation NOUN 6 dobj
"""], norm="Hybrid cloud drives faster innovation", norm_sents=["""
Hybrid hybrid ADJ 2 amod
cloud cloud NOUN 3 nsubj
drives drive VERB 0 ROOT
faster fast ADJ 5 amod
innovation innovation NOUN 3 dobj
"""], triples=[("Hybrid cloud", "drives", "faster innovation", "nsubj,dobj")])

post("g50", "@user_one @user_two https://t.co/Zq81", ["""
@user_one @user_one PROPN 0 ROOT m DROP
@user_two @user_two PROPN 1 appos m DROP
https://t.co/Zq81 https://t.co/Zq81 X 1 dep u DROP
"""], norm="")

post("g51", "Zürich Insurance launches a digital claims service.", ["""
Zürich Zürich PROPN 2 compound
Insurance Insurance PROPN 3 nsubj
launches launch VERB 0 ROOT
a a DET 7 det
digital digital ADJ 7 amod
claims claim NOUN 7 compound
service service NOUN 3 dobj
. . PUNCT 3 punct
"""], triples=[("Zürich Insurance", "launches", "digital claims service", "nsubj,dobj")])

post("g52", "@IBM expands its hybrid cloud partnership with @RedHat.", ["""
@IBM @IBM PROPN 2 nsubj m
expands expand VERB 0 ROOT
its its PRON 6 poss
hybrid hybrid ADJ 6 amod
cloud cloud NOUN 6 compound
partnership partnership NOUN 2 dobj
with with ADP 6 prep
@RedHat @RedHat PROPN 7 pobj m
. . PUNCT 2 punct
"""], triples=[("@IBM", "expands", "hybrid cloud partnership with @RedHat", "nsubj,dobj")])


post("g53", "Remote work is fueling demand for collaboration tools.", ["""
Remote remote ADJ 2 amod
work work NOUN 4 nsubj
is be AUX 4 aux
fueling fuel VERB 0 ROOT
demand demand NOUN 4 dobj
for for ADP 5 prep
collaboration collaboration NOUN 8 compound
tools tool NOUN 6 pobj
. . PUNCT 4 punct
"""], triples=[("Remote work", "fueling", "demand for collaboration tools", "nsubj,dobj")])


# -- synthetic word vectors ---------------------------------------------------------

# Verb tokens grouped by meaning; members sit close to a shared centroid.
FAMILIES = {
    "buy": ["acquires", "acquired", "bought", "buys"],
    "fuel": ["fueling", "fuels", "driven", "by", "accelerated", "accelerate"],
    "identify": ["identify", "quantifies", "predict"],
    "use": ["uses", "using", "use"],
    "launch": ["launches", "introduces", "unveils", "released", "opened", "expands"],
    "adopt": ["adopt", "implement", "implemented"],
    "transform": ["transforming", "reshapes", "revolutionized", "digitize"],
    "generate": ["generates", "produces", "drive", "drives"],
    "improve": ["improve", "enabling", "impact"],
}
DIM = 50


def parse_block(block):
    toks = []
    for line in block.strip().splitlines():
        f = line.split()
        surface, lemma, upos, head, deprel = f[:5]
        kind, ent, drop = "plain", "", False
        for extra in f[5:]:
            if extra in KINDS:
                kind = KINDS[extra]
            elif extra.startswith("ENT="):
                ent = extra[4:]
            elif extra == "DROP":
                drop = True
            else:
                raise ValueError(f"bad field {extra!r} in {line!r}")
        toks.append(dict(surface=surface, lemma=lemma, upos=upos, head=int(head), deprel=deprel,
                         kind=kind, ent=ent, drop=drop))
    check_tree(toks)
    return toks


def check_tree(toks):
    n = len(toks)
    roots = [i for i, t in enumerate(toks, 1) if t["head"] == 0]
    if len(roots) != 1:
        raise ValueError(f"{len(roots)} roots in {[t['surface'] for t in toks]}")
    for i, t in enumerate(toks, 1):
        seen = set()
        cur = i
        while cur:
            if cur in seen or not 0 <= toks[cur - 1]["head"] <= n:
                raise ValueError(f"bad head chain from {t['surface']}")
            seen.add(cur)
            cur = toks[cur - 1]["head"]


def place(text, sents):
    """Assigns byte offsets by scanning the text left to right."""
    raw = text.encode("utf-8")
    pos = 0
    for toks in sents:
        for t in toks:
            s = t["surface"].encode("utf-8")
            at = raw.find(s, pos)
            if at < 0:
                raise ValueError(f"{t['surface']!r} not found in {text!r} after byte {pos}")
            if raw[pos:at].strip():
                raise ValueError(f"unparsed text {raw[pos:at]!r} in {text!r}")
            t["start"], t["end"] = at, at + len(s)
            pos = at + len(s)
    if raw[pos:].strip():
        raise ValueError(f"unparsed tail {raw[pos:]!r} in {text!r}")


def without_dropped(toks):
    keep = [i for i, t in enumerate(toks, 1) if not t["drop"]]
    renum = {old: new for new, old in enumerate(keep, 1)}
    out = []
    for old in keep:
        t = dict(toks[old - 1])
        if t["head"] and t["head"] not in renum:
            raise ValueError(f"{t['surface']} depends on a dropped token; give norm_sents")
        t["head"] = renum.get(t["head"], 0)
        out.append(t)
    return out


def conllu_block(pid, si, toks):
    lines = [f"# post_id = {pid}", f"# sent_index = {si}"]
    for i, t in enumerate(toks, 1):
        misc = f"StartChar={t['start']}|EndChar={t['end']}|TokenType={t['kind']}"
        if t["ent"]:
            misc += f"|EntType={t['ent']}"
        lines.append("\t".join([str(i), t["surface"], t["lemma"], t["upos"], "_", "_", str(t["head"]),
                                t["deprel"], "_", misc]))
    return "\n".join(lines) + "\n\n"


def main():
    raw_conllu, norm_conllu, coref, expect_norm, expect_triples = [], [], [], [], []
    with open(HERE / "posts.jsonl", "w", encoding="utf-8") as fp:
        for p in POSTS:
            fp.write(json.dumps({"id": p["id"], "text": p["text"]}, ensure_ascii=False) + "\n")

    verbs = set()
    for p in POSTS:
        sents = [parse_block(b) for b in p["sents"]]
        place(p["text"], sents)
        for si, toks in enumerate(sents):
            raw_conllu.append(conllu_block(p["id"], si, toks))
            verbs.update(t["surface"].lower() for t in toks if t["upos"] in ("VERB", "AUX", "ADP"))
        if p["duplicate"]:
            continue
        norm = p["text"] if p["norm"] is None else p["norm"]
        expect_norm.append(f"{p['id']}\t{norm}\n")
        if p["norm_sents"]:
            second = [parse_block(b) for b in p["norm_sents"]]
        else:
            second = [without_dropped(t) for t in sents]
            second = [t for t in second if t]
        if norm:
            place(norm, second)
            for si, toks in enumerate(second):
                norm_conllu.append(conllu_block(p["id"], si, toks))
        if p["coref"]:
            coref.append(json.dumps({"post_id": p["id"], "chains": p["coref"]}) + "\n")
        for s, v, o, pattern, *flags in p["triples"]:
            neg = "neg" in flags
            question = "question" in flags
            expect_triples.append(f"{p['id']}\t{s}\t{v}\t{o}\t{pattern}\t{int(neg)}\t{int(question)}\n")

    (HERE / "parses.conllu").write_text("".join(raw_conllu), encoding="utf-8")
    (HERE / "parses_normalized.conllu").write_text("".join(norm_conllu), encoding="utf-8")
    (HERE / "coref.jsonl").write_text("".join(coref), encoding="utf-8")
    (HERE / "expected_normalized.tsv").write_text("".join(expect_norm), encoding="utf-8")
    (HERE / "expected_triples.tsv").write_text(
        "post_id\tsubject\tverb\tobject\tpattern\tnegated\tinterrogative\n" + "".join(expect_triples), encoding="utf-8")

    rng = random.Random(20240521)
    gauss = lambda scale: [rng.gauss(0.0, scale) for _ in range(DIM)]
    rows = {}
    for members in FAMILIES.values():
        centre = gauss(1.0)
        for w in members:
            rows[w] = [c + e for c, e in zip(centre, gauss(0.05))]
    for w in sorted(verbs):
        if w not in rows:
            rows[w] = gauss(1.0)
    with open(HERE / "vectors.txt", "w", encoding="utf-8") as fp:
        for w in sorted(rows):
            fp.write(w + " " + " ".join(f"{x:.6f}" for x in rows[w]) + "\n")


if __name__ == "__main__":
    main()
