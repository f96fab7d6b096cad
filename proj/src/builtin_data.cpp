// Built-in registry descriptors and task catalog.

#include "pitchside/builtin_data.hpp"

namespace pitchside::builtin {

const std::vector<toolbox::ToolDescriptor>& tool_descriptors() {
    static const std::vector<toolbox::ToolDescriptor> kTools = {
        {
            "Choice Selection",
            "Given an open-ended answer to a question, the tool identifies the most appropriate answer choice from a set of closed-ended (multiple-choice) options. It analyzes the open answer and matches it to the correct option.",
            "A query containing the question and its according options (in forms of 'o1', 'o2',), together with an answer which is generated already as an openQA answer",
            "No material input is acceptable, or some relevant file could also be input",
            "Considering the question and the openQA answer, the option will be generated finally.",
            "This tool is only used for those CloseQA settings, especially when the openQA answer is already generated.",
        },
        {
            "LLM",
            "Given a prompt, the tool can perform a variety of natural language tasks such as text generation, question answering, summarization, sentiment analysis, translation and more, leveraging the power of a large-scale pre-trained language model. You can use it as a tool of solving textual problems.",
            "A prompt that has clear requirement, and better to have define the output form",
            "No file material needed.",
            "The response according to the prompt.",
            "Just understand this tool as a powerful language model, which can be used to solve various textual problems.",
        },
        {
            "Action Classifier",
            "Given a video clip, the tool classifies the actions of the soccer event to one of the 24 predefined types.",
            "No compulsory query input needed, the question setting could be provided as the query input.",
            "A list with first element is the file path to a video.",
            "Output one or more categories that are most likely to be the classified event type of the video in material input.",
            "This step can generate the most probable types of actions in the video. With normally over 80 percents of top-1 accuracy.",
        },
        {
            "Commentary Generation",
            "Given a video clip and game context, the tool generates commentary text based on the events in the video clip. Such commentary is anonymized with '[PLAYER]', '[TEAM]', '[REFEREE]', '[COACH]' for according entities",
            "No compulsory query input needed, the question setting could be provided as the query input.",
            "A list with first element is the file path to a video.",
            "Output a commentary that can describe the soccer event happened in the video of material input.",
            "CIDEr Score to ground truth around 0.2-0.5.",
        },
        {
            "Foul Recognition",
            "Given multi-view foul video clips, the tool recognizes the fouls in the soccer match and classifies them into different categories severity from 1 to 5 and select according foul type, etc.",
            "The question setting could be provided as the query input.",
            "A list of videos that are all multi-view foul video clips of same foul.",
            "The foul type and severity will be provided.",
            "severity from integer 1 to 5, and the type of the foul.",
        },
        {
            "Game Search",
            "Given some information of a match, the tool retrieve which game it is from soccer match database. The games are from 6 European major leagues (England Premier, Germany Bundesliga, Italy Serie-a, Spain LaLiga, France Ligue-1 and European Champions League) during 2017-2024.",
            "Just the original question as query input here, containing some game information.",
            "No compulsory file path needed.",
            "The JSON file path of the retrieved game. Or if no matching file, will response accordingly.",
            "This tool must be done at first to get the game context if you want to know the game information (e.g. who is the referee, how many attendance, how many corner kick in total, etc), and then other tools can be used with such JSON file.",
        },
        {
            "Game Info Retrieval",
            "Knowing the game context, the tool retrieves the game information from the soccer match database. Such information specially refers to those information that could be know before the match kick off moment (e.g. the referee, coach, the attendance, the formation) and final results like final scores.",
            "Query input could be the original question, or the well defined question that can help retrieve the question.",
            "A list with first file (always only one file) is JSON file path provided by Game Search.",
            "The answer to query input considering the game contents from the JSON game file.",
            "This tool is always used after Game Search, and the game information is always provided in the JSON file. This tool is always done sequentially with 'Match History Retrieval' with same query and material input so that the total match info would be retrieved.",
        },
        {
            "Match History Retrieval",
            "Knowing the game context, the tool retrieves the match history information from the soccer match database. Such match history is always the textual live stream of whole game in a JSON file from Game Search tool.",
            "Query input could be the original question, or the well defined question that can help retrieve the question.",
            "A list with first file (always only one file) is JSON file path provided by Game Search.",
            "The answer to query input considering the game contents from the JSON game file.",
            "This tool is always used for retrieve some information of the game process itself or some statistics of the game. This tool is always done sequentially with 'Game Info Retrieval' with same query and material input so that the total match info would be retrieved.",
        },
        {
            "Textual Retrieval Augment",
            "Given a text query, the tool retrieves the relevant information from given soccer information or database page.",
            "Prompt query could be the original question, or the well defined question that can help retrieve the question.",
            "A list with first file (always only one file) is JSON file path provided by Game Search.",
            "The answer to query input considering the game contents from the JSON game file.",
            "This tool is always used for retrieve information except above two tools. It's always be used for background information of players, teams, coaches, referees, venues, etc. You can understand it as a retrieval tool of a huge soccer background database.",
        },
        {
            "Textual Entity Search",
            "Given question about an entity (player, team, etc.), the tool retrieves the requiring entity of the question, and return its according WikiPage. The entity database contains the history and background knowledge for all the players, teams, venues, coaches and referees from games are from 2022 World Cup and 6 European major leagues (England Premier, Germany Bundesliga, Italy Serie-a, Spain LaLiga, France Ligue-1 and European Champions League) during 2017-2024.",
            "Prompt query could be the original question.",
            "No compulsory material input needed.",
            "A list with first file (always only one file) is JSON file path containing the according entity's information.",
            "Here is an important part that if the retrieval requirement is out of the game range in 'Game Search' database, you need to find that knowledge here to identify entity first, then retrieve the background knowledge.",
        },
        {
            "Number Recognition",
            "Given one or more images, detect and recognize the jersey number of the player present in the images.",
            "No compulsory query input needed, the question setting could be provided as the query input.",
            "A list containing paths of a player's images.",
            "Jersey number of the player in the images. If no jersey number is detected, the result is -1.",
            "If you want to know the jersey number of the player in the picture, please use the Number Recognition tool.",
        },
        {
            "Camera Detection",
            "Given one image or one video, the tool identifies and classifies the type of camera positions within the image or video among 13 camera types (e.g., Main Camera Center, Close-up player or field referee, Close-up Behind the Goal, etc.).",
            "No compulsory query input needed, the question setting could be provided as the query input.",
            "A list with first element is the path to a match image or video.",
            "The camera position in the image. There are 13 possible results.",
            "If you want to know the camera position of a specific frame or a video clip in the game, please use the Camera Detection tool.",
        },
        {
            "Replay Grounding",
            "Given more than one video clips, the tool assumes that the first one is a replay video and determines the clip being replayed from the next four clips.",
            "No compulsory query input needed, the question setting could be provided as the query input.",
            "A list with five video paths. The first element is the path to a replay clip. The remaining four are possibly being replayed video clip paths.",
            "The path of video clip being replayed.",
            "If you want to find the corresponding replay video clip from a set of video clips, please use the Replay Grounding tool.",
        },
        {
            "Entity Recognition",
            "Given one or more images, the tool identifies and recognizes the name of the player present in the images through face matching.",
            "No compulsory query input needed, the question setting could be provided as the query input.",
            "A list containing paths of a player's images.",
            "The name of the player in the image. If no face is detected or no matching player is found, returns 'None'.",
            "If you have some pictures of players and want to know who is in the picture, you can use Entity Recognition tool.",
        },
        {
            "Jersey Color Relevant VQA",
            "Given an image/video and a text query about soccer jersey, the tool generates answers or descriptions related the jersey color relevant QA answers. You can obtain any information about jersey (color) from this tool to help you understand soccer.",
            "A text prompt describing the information you want to know about the jersey color in this image/video.",
            "A list containing the path of a single image, a sequence of images, or a video.",
            "The response exactly answer the jersey relevant questions.",
            "This tool is required when you need any information about soccer and you don't have that, during your reasoning and QA process.",
        },
        {
            "Segment",
            "Given an image and a text description of the object you want to segment, the tool will get the bounding box coordinates of the object and the corresponding confidence score.",
            "A text description of the object you want to segment. The description should be as concise as possible and clear in direction.",
            "A list with first element is the path to a image you want to segment.",
            "The bounding box coordinates of the object you want to segment and the corresponding confidence score.",
            "If you want to segment an object (such as a player) in a photo to get a partial image, you can use Segment tool.",
        },
        {
            "Score and Time Recognition",
            "Given a video clip of match, the tool recognizes the score and time of the game from the soccer broadcast video clip.",
            "Give a query input about what you exactly want to know about score or game time, the question setting could be provided as the query input.",
            "A list with single elements of image or a video clip from soccer game broadcast.",
            "Output the score and the game time shown in the file screenshot. If more than 1 picture was provided, return these information one by one.",
            "This tool is used to recognize the score and time of the game from the soccer broadcast video clip, with image as input and text as output.",
        },
        {
            "Frame Selection",
            "Given a description query and a video of soccer game, the tool would select the frame that best match the prompt and save that frame as an image to certain path. Such image could be used for later steps.",
            "A prompt describing the frame that you want to obtain from the video.",
            "A list with single element of file path to the video path.",
            "The file path of the saved image frame selected from the video according to the query prompt.",
            "If the next step needs compulsory input of image but you only have video. This tool would be helpful.",
        },
    };
    return kTools;
}

const std::vector<planner::TaskCatalogEntry>& task_catalog() {
    static const std::vector<planner::TaskCatalogEntry> kTasks = {
        {1,
         "Background knowledge text QA",
         "is a task that asks questions about the basic information of a specific players, referee, team and venues. Ask about those questions could be answer from their WikiPage",
         {"Textual Entity Search", "Textual Retrieval Augment", "LLM"}},
        {2,
         "Match Situation QA",
         "is a task that asks questions about the basic information of a specific match, the players and coaches of both teams, and important events of the match (goals, assists, red and yellow cards, etc.) The game range only covers 2014-2024's six european major leagues (Premier, Bundesliga, Serie-a, Ligue-1, Laliga and European Champions League)",
         {"Game Search", "Game Info Retrieval", "Match History Retrieval", "LLM"}},
        {3,
         "Match Events and Statistical QA",
         "is a task to ask questions about the history events of the match. For example, 'How many corners has xxx team get in the first half?'. The game range only covers 2014-2024's six european major leagues (Premier, Bundesliga, Serie-a, Ligue-1, Laliga and European Champions League)",
         {"Game Search", "Game Info Retrieval", "Match History Retrieval", "LLM"}},
        {4,
         "Camera Status Classification",
         "is a task that determines the state of the camera position in the picture at a certain moment in the game.",
         {"Camera Detection", "LLM"}},
        {5,
         "Background knowledge Image QA",
         "is a task that asks questions with one or more images about the basic information of a specific players, referee, team and venues.",
         {"Entity Recognition", "Textual Entity Search", "Textual Retrieval Augment", "LLM"}},
        {6,
         "Jersey Number Recognition",
         "is a task to identify the jersey numbers of a players in images.",
         {"Number Recognition", "LLM"}},
        {7,
         "Score and Time Relevant QA",
         "is a task asking about questions that starts from scores or gametime, which means you need to recognize the time or score from the given materials of soccer broadcast. Sometimes you need to know game information and sometimes you only need to recognize and then answer the question.",
         {"Score and Time Recognition", "LLM"}},
        {8,
         "Camera Status Switching",
         "is a task to judge the state of the camera position switching in the video clip.",
         {"Shot Change", "Camera Detection (twice)", "LLM"}},
        {9,
         "Replay Grounding",
         "is a task to identify which video clip is being replayed from a set of clips, with the first clip serving as the replay.",
         {"Commentary Generation (five times)", "LLM"}},
        {10,
         "Action Classification",
         "is a task to classify the actions of the events on soccer game in the video clip.",
         {"Action Classifier", "LLM"}},
        {11,
         "Commentary Generation",
         "is a task to generate commentary for the events in the video clip.",
         {"Commentary Generation", "LLM"}},
        {12,
         "Commentary Relevant QA",
         "is a task to ask questions about background information of certain player with the question having commentary descriptions.",
         {"Vision Language Model", "LLM"}},
        {13,
         "Jersy Color Relevant QA",
         "is a task to ask questions about soccer stuffs like players, matches. All these questions are with elements of jersey colors.",
         {"Vision Language Model", "LLM"}},
        {14,
         "Multi-view Foul Recognition",
         "is a task to recognize the fouls in the video clip from multiple views.",
         {"Foul Recognition", "LLM"}},
    };
    return kTasks;
}

}  // namespace pitchside::builtin
