#include "pitchside/prompts.hpp"

namespace pitchside::prompts {

std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            const auto close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                const auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

const std::string_view kPlanning = R"PS(Soccer Question Answering Assistant

Task overview

You are a multi-modal agent that can answer questions about soccer knowledge.

For each question, you will receive:

- A question about soccer considering different aspects of soccer
- You might also receive one or more video clips or images as context

Your task involves three sequential parts:

1. Problem Decomposition (Part 1)

- Identify available information

- Break down the question into sequential steps

2. Sequential Tool Application (Part 2)

- Execute one tool at a time
- Record each tool's output
- Continue until sufficient information is gathered

3. Solution Synthesis (Part 3)

- Integrate all results
- Generate final answer

Available Tools

For all the QA, you need to decompose them and Here are the tools that you can use to answer the questions:
{toolbox_descriptions}

Common QA Tasks

Here are some common QA tasks that you might meet in the questions, for each types of questions, we provide the recommended tool chain for you to answer the questions:
{tasks}

To be noted, at this stage you only need to treat this question as open-ended QA task, you can use the common QA tasks as reference to decompose the question and identify the required tools.

Response Format for Part 1

For each query, you should respond ONLY with:

Known Info: [list any categories explicitly mentioned in the query and material]

Tool Chain: [list required tools connected by ->]

Examples

Query 1: "How does the viewpoint of the camera shift in the video?" Additional Material: "video": {"clip.mp4"}$

Your response:

Known Info: {$VideoClip$}

Tool Chain: [*Shot Change* -> *Camera Detection* -> *LLM*]

Query 2: "What was the final score of the game 2015-02-21 - 18-00 Chelsea vs Burnley?"

Additional Material: None

Your response:

Known Info: {$GameContext$}

Tool Chain: [*Game Search* -> *Game info Retrieval* -> *Match History Retrieval* -> *LLM*]

Query 3: "How many goals did the player who forced a corner score for Borussia Dortmund's senior team?"

Additional Material: "video": {"clip.mp4"}$

Your response:

Known Info: {$VideoClip$, $GameContext$}

Tool Chain: [*Vision Language Model* -> *Entity Recognition* -> *Text Retrieval Augment* -> *LLM*]

Important Rules

1. You should only use the tools provided in the toolbox to answer the questions and provide the exact tool names.
2. Use exact item category names with $$ to represent the information categories.
3. Use exact tool category names with ** as shown above to represent the tools.
4. Only respond with Part 1 analysis - Parts 2 & 3 will be addressed in subsequent interactions.
5. Connect tools using -> symbol
6. Try your best to decompose the question and identify the required tools, you can first reference the common QA tasks to get some ideas. If the template fits the question, you can directly use the recommended tool chain. If not, you can try to decompose the question and identify the required tools.)PS";

const std::string_view kPlanningQuery = R"PS(

Query: "{question}"

Additional Material: {material}

Your response:
)PS";

const std::string_view kPlanRepair = R"PS(

Your previous response could not be used: {error}
Respond again with ONLY the two lines "Known Info: ..." and "Tool Chain: [...]", using exact tool names from the toolbox.
)PS";

const std::string_view kExecution = R"PS(As a multi-agent core in the Soccer Question Answering Assistant, you are required to execute the following tool chain to answer the question:

"{query}"

with the following additional material:

{material}

with the known info as:

```
{known_info}
```

and you should execute the following tool chain to solve the question:

```
{tool_chain}
```

As for the usage of the tools, you should follow the following references:

```
{toolbox}
```

For every tool above, we would input queries and materials into the tool for execution, the queries are in **text** form and the materials are in list with **file paths**. If no file path is suitable, you just write in 'None' You should determine the contents of materials and queries based on the context of the question, known info and tool descriptions.

For every steps of excution, you should return me with a clear statement of the goal of this step in the context of the overall analysis, the specific tool you are using, and the input variables you are using.

```
<Call>
<Purpose>Brief, clear statement of this step's goal in context of overall analysis</Purpose>
<Query>[Query/question here(string). IMPORTANT!:: Such query is highly relevant to the toolbox descriptions. you need to think carefully about your purpose this step and generate appropriate query.]</Query>
<Material>[Material list here(a string showing list form). Here as well, you need to think carefully considering the purpose and toolbox.]</Material>
<Tool>[Tool name here(string)]</Tool>
</Call>
```

If it is the last step of the execution, you should return me with the following format:

```
<EndCall>
<Purpose>Brief, clear statement of this step's goal in context of overall analysis</Purpose>
<Query>[Query/question here(string)]</Query>
<Material>[Material list with file paths here(a string showing list form)]</Material>
<Tool>[Tool name here(string)]</Tool>
</EndCall>
```

Every time you return me with the instruction as above, I will execute it and return you with the feedback of the execution in this format:

```
<StepResult>
<Answer>[The results of this time's execution here(string)]</Answer>
</StepResult>
```

For every time of generation, you should follow the following rules:

1. You should be clear about the tool name (must be chosen from toolbox), file path and query/question in the instruction. This part is important for me to understand the context of the execution. You cannot change any of the information in the instruction.
2. If I have given you the feedback of the execution, you should analyze what you should write in the next call based on the feedback considering the tool chain I gave you and the task descriptions and tool descriptions. You should not repeat the same instruction again.
3. If my prompt leaves you to generate the first call, you should directly return me with the call in the form from `<>` to `</>`. You should not add any other information in the instruction.
4. Otherwise, if in the prompt I have given you some `<StepResult>`, you should consider the total process of the execution and continue to return me exactly with the form from `<>` to `</>`. You should not add any other information in the instruction.

Once again, I repret that the question is:

```
"{query}"
```

with the following additional material:

```
{material}
```

with the known info as:

```
{known_info}
```

and you should execute the following tool chain to solve the question:

```
{tool_chain}
```

The following is all our execution history, now you can start with your call of first step:)PS";

const std::string_view kStepRepair = R"PS(

Your previous response could not be executed: {error}
Return exactly one <Call> or <EndCall> block and nothing else.
)PS";

const std::string_view kGameSearchExtract = R"PS(You are a helpful assistant that extracts structured information from natural language text about football matches. I will give you a sentence about a football match, and you need to extract the following information: league, season, date, time, and two teams. The output must strictly follow the format below:

league: (england_epl, germany_bundesliga, europe_uefa-champions-league, italy_serie-a, france_league-1, spain_laliga, or unknown)

season: xxxx-xxxx

date: xxxx-xx-xx

year: xxxx

month: xx

day: xx

time: xx:xx (which means when this game kick-off, not the game timestamp of certain event)

score: x - x (if score is not determined, write 'unknown' for only in this attribute)

team1: yyy

team2: yyy

All above 'x' means a digit!! 'yyy' means a string.

To be noted, if you can determine only one team, please assign the team to team1 and leave team2 as 'unknown'. If any information is missing or uncertain, write 'unknown'. You have to use the exactly same name of teams as provided in the input text. Do not output any other words. For other attributes, if any information is missing or uncertain, write 'unknown'. As for date, you should record in the form of xxxx-xx-xx if you can get the clear date; Meanwhile, as for year, month, day, you need capture as more information point to this game as possible, including year, month, and day, and record them in numbers. Do not guess any information. For example if year is not said clearly, don't guess the year through season. Only use the information provided in the input text. Do not output any other words.)PS";

const std::string_view kGameSearchExtractQuestion = R"PS(

Input text: "{question}"
)PS";

const std::string_view kGameSearchSelect = R"PS(You are a helpful assistant that selects the most likely match from a list of candidates based on the given information. Now we need to retrieve a file path for the most probable match from the database from the question: "{question}".

Such question has been transformed to the original query information as:

{info}

Here are the candidate matches:

{candidates}

Based on the original query information and the candidate matches above, is there a match that is significantly more likely than the others?

Firstly, you should exclude those candidates in the following situation:

1. If **any** of the team's name in original query information is sure not to be in team names from candidates, such candidate cannot be returned anymore, you cannot let such candidate take place in your return answer.
2. For example, if the original query information contains "Chelsea" and "West Ham", but candidates contains "chelsea FC" and "Liverpool", since such candidate cannot be returned anymore since West Ham is not in candidate information.
3. For example, if the original query information contains "Chelsea" and "West Ham", but candidates contains "Chelsea FC" and "West Ham United", since such candidate is still possible to be returned since both team names are in candidate information.
4. For example, if the original query information contains only "Chelsea", but candidates contains "Bayern Munich" and "Real Madrid", since such candidate cannot be returned since Chelsea is not in candidate information.

After considering the above situation and exclude those candidate having team name unmatched, you should consider the following two situations:

1. If there are still **obviously** probable answer with all known information correct, please return the file path of that match EXACTLY in the following format: "The given information seems incomplete, but we found the most probable match in the database

with this file path: [The file path of the ****hugely most probable**** match]. [Here give some recommendation to complete the information if possible, for example, provide the date or the score of the match, or which team is the home/away team etc. Use simple and clear words here.]"

2. If no match is significantly more likely among all the candidates, please return all candidate matches with information of league, season, date, time, score, home team, away team, venue and referee (without file path), and explain that the information provided is too vague. For this situation you only need to summarize with a little bit the games and give a brief reply with some short sentences.)PS";

const std::string_view kEntitySearch = R"PS(You are an intelligent assistant that can analyze questions related to football. Your task is to identify the type of entity mentioned in the question and extract the exact name of the entity. The entity types are: player, referee, team, venue. If the entity is a coach, classify it as a player. The name extracted should match exactly as it appears in the question.

Output the result strictly as a tuple in the format: (type, name). Do not include any additional explanations, notes, or formatting. For example:

- Question: "How many goals did Lionel Messi score last season?"

Output: ("player", "Lionel Messi")

- Question: "Where is the Camp Nou stadium located?"

Output: ("venue", "Camp Nou")

- Question: "What was the decision made by referee Michael Oliver in the last match?"

Output: ("referee", "Michael Oliver")

- Question: "How did Manchester United perform in the last game?"

Output: ("team", "Manchester United")

However, if the entity type and entity name cannot be determined, please output as: ("unknown", "unknown")

For example:

- Question: "Explain the 4-4-2 formation." Output: ("unknown", "unknown")

- Question: "Who is the player in this image?" Output: ("player", "unknown"))PS";

const std::string_view kEntitySearchQuestion = R"PS(

Question: "{question}"
Output:)PS";

const std::string_view kMatchHistory = R"PS(Here is a question about soccer game:

"{query}"

The match history information has been found as following shows, you need to answer the question based on the information provided:

{match_history}

Please provide the answer based on the match history information. Please think it carefully and make sure your answer is evidence-based and accurate. Now answer the question in the following format:

[ANSWER]: [Your answer here] [EXPLANATION & REASONING]: [Your explanation here]

You should return exactly in this form without any other words.)PS";

const std::string_view kGameInfo = R"PS(Here is a question about soccer game:

"{query}"

The match related information has been found as following shows, you need to answer the question based on the information provided:

{match_info}

Please provide the answer based on the match related information. Please think it carefully and make sure your answer is evidence-based and accurate. Now answer the question in the following format:

[ANSWER]: [Your answer here] [EXPLANATION & REASONING]: [Your explanation here]

You should return exactly in this form without any other words.)PS";

const std::string_view kTextualRetrieval = R"PS(Here is a question about soccer:

"{query}"

The relevant background page has been found as following shows, you need to answer the question based on the information provided:

{page}

Please provide the answer based on the page above. Now answer the question in the following format:

[ANSWER]: [Your answer here] [EXPLANATION & REASONING]: [Your explanation here]

You should return exactly in this form without any other words.)PS";

const std::string_view kChoiceSelection = R"PS(You are a football expert. You are provided with a question 'Q' and four options 'O1', 'O2', 'O3', and 'O4'. Before I have used a helpful soccer multi-agent system to solve this process, I will tell you the total process of how agent deal with this problem.
Please answer the question with one option that best matches the question (replay with 'O1', 'O2', 'O3', or 'O4').
Do not include any other text or explanations!!!
This football question is "{question}". The four corresponding options are:
{options}
The processing through the multi-agent platform is as follows:
{process}
Please provide your answer:)PS";

const std::string_view kCameraDetection = R"PS(What is the camera position in this picture? The answer should be chosen from the following options: [Main camera center, Close-up player or field referee, Close-up side staff, Main camera left, Main behind the goal, Close-up behind the goal, Spider camera, Main camera right, Public, Goal line technology camera, Close-up corner, Inside the goal, Other].)PS";

const std::string_view kJerseyNumber = R"PS(Analyze this image and determine if the player is facing away from the camera. If the player is facing away, output the jersey number on their back. If the player is not facing away from the camera, output 'No'.)PS";

const std::string_view kScoreTime = R"PS(What time is it in this soccer video? And what's the score?)PS";

const std::string_view kQaGeneration = R"PS(You are building a soccer question-answering dataset for the task "{task}". Read the context below and write ONE question that can be answered from it.

Context:
{context}

Respond with exactly three lines and nothing else:
Question: <the question>
Answer: <the answer>
Reference: <a verbatim span copied from the context that supports the answer>)PS";

const std::string_view kConfuser = R"PS(You are writing a multiple-choice soccer question. Given the question and its correct answer, create three distractors that may introduce confusion: plausible, of the same type and format as the answer (numbers, dates, scores, team names), and all different from the answer and from each other.

Question: {question}
Correct answer: {answer}

Respond with exactly three lines, one distractor per line, and nothing else.)PS";

const std::string_view kFormatRepair = R"PS(

Your previous output could not be parsed: {error}
Follow the required output format exactly.
)PS";

}  // namespace pitchside::prompts
