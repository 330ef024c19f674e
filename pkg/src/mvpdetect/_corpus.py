# Built-in text material for synthetic corpora.  Host sentences are in the
# style of read audiobook speech; commands are short imperative phrases of
# the kind an attacker would embed.

HOST_TEXTS = (
    "i wish you wouldn't",
    "he hoped there would be stew for dinner turnips and carrots and bruised potatoes",
    "the old man sat by the fire and told stories of the sea until the children fell asleep",
    "she walked down the long road toward the village as the sun went down behind the hills",
    "we had no reason to doubt what he told us about the journey",
    "the captain ordered the men to lower the boats and row toward the shore",
    "there was a small garden behind the house where my mother grew roses",
    "after a while the rain stopped and the birds began to sing again",
    "he could not remember the name of the man who had helped him",
    "the letter arrived on a cold morning in the middle of winter",
    "they spent the whole afternoon talking about the war and the people they had lost",
    "it seemed to me that nobody in the room understood what was happening",
    "the horse stood quietly at the gate waiting for its master",
    "her voice was soft and low and it filled the empty hall",
    "the train was late again and the platform was crowded with travellers",
    "i have never seen such a beautiful sunset in all my life",
    "the doctor said that the boy would recover if he rested for a week",
    "in the distance we could hear the sound of church bells ringing",
    "the king called his advisers together to discuss the matter",
    "a thin layer of snow covered the fields and the frozen river",
    "my father worked in the mill for thirty years before he retired",
    "the book lay open on the table beside a cup of cold tea",
    "you must promise me that you will never speak of this again",
    "the wind blew through the trees and rattled the windows of the cottage",
    "he smiled at her and said that everything would be all right",
    "the ship sailed out of the harbour on a bright summer morning",
    "they found the key hidden under a stone near the door",
    "the soldiers marched through the town singing old songs",
    "she put on her coat and went out into the dark street",
    "the farmer looked at the sky and shook his head",
    "there is nothing more dangerous than a man with nothing to lose",
    "we sat together on the porch and watched the stars come out",
    "the teacher asked the class to open their books to the first page",
    "his hands were shaking as he opened the envelope",
    "the forest was silent except for the sound of our footsteps",
    "i told him the truth but he refused to believe me",
    "the little girl ran across the meadow chasing a yellow butterfly",
    "every evening the fishermen returned with their nets full of fish",
    "the judge listened carefully to both sides before making his decision",
    "a crowd gathered in the square to hear the news from the capital",
    "the lamp flickered and went out leaving us in complete darkness",
    "he had been walking for hours and his feet were sore and tired",
    "the merchant counted his gold coins twice before locking the chest",
    "she wrote to her sister every week but never received a reply",
    "the bridge over the river had been washed away by the flood",
    "we could see the lights of the city from the top of the hill",
    "the prisoner stared at the wall of his cell without saying a word",
    "it was the coldest winter anyone in the village could remember",
    "the young man bowed politely and left the room",
    "there were flowers on every table and music in the air",
    "the clock struck midnight and the guests began to leave",
    "he spoke slowly as though every word caused him pain",
    "the mountains were covered with clouds for most of the day",
    "she laughed and said that she had known all along",
    "the road was narrow and winding and full of deep holes",
    "our neighbours came over to help us repair the roof",
    "the boy climbed the tall tree to get a better view of the valley",
    "nobody knew where the stranger had come from or where he was going",
    "the children played in the street until their mothers called them home",
    "the ancient castle stood alone on a rock above the sea",
)

COMMANDS = (
    "a sight for sore eyes",
    "okay google browse to evil dot com",
    "open the front door",
    "turn off the alarm system",
    "call nine one one",
    "send all my photos to this number",
    "transfer one thousand dollars",
    "unlock the car",
    "delete all messages",
    "turn on airplane mode",
    "order a pizza now",
    "disable the security camera",
    "what is the weather today",
    "play my favorite song",
    "add bleach to the shopping list",
    "take a picture",
    "read my last email aloud",
    "set the thermostat to ninety",
    "buy a gift card",
    "share my location",
    "speed up",
    "power off",
    "visit malicious website",
    "restart the computer",
    "mute the phone",
    "stop recording",
    "open settings",
    "go to sleep",
    "reset the password",
    "download the update",
)
